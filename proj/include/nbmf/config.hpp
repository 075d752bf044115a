#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nbmf/grid.hpp"
#include "nbmf/mfg_solver.hpp"
#include "nbmf/phy_rate.hpp"
#include "nbmf/spatial_model.hpp"
#include "nbmf/traffic_model.hpp"

namespace nbmf {

/// Raised for unknown keys, bad units and failed invariants. The message
/// names the section.key at fault.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// (E0, B0) initial state for per-trajectory metrics.
struct InitialState
{
    double e0 = 0.0;  ///< J
    double b0 = 0.0;  ///< bits

    friend bool operator==(const InitialState&, const InitialState&) = default;
};

struct ExperimentSettings
{
    std::uint64_t seed = 1;
    int jobs = 1;
    /// SBS densities, per m^2.
    std::vector<double> beta_s_sweep{1e-3, 1e-2, 3e-2, 1e-1, 3e-1};
    /// Two densities for the convergence traces, per m^2.
    std::vector<double> convergence_beta_s{1e-3, 3e-1};
    std::vector<double> lambda_u_sweep{1.0 / 60.0, 1.0 / 900.0, 1.0 / 10800.0};
    std::vector<int> mcs_sweep{0, 4, 8};
    std::vector<double> r_safe_sweep{3.0, 4.0};
    std::vector<double> distances{1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0};
    std::vector<InitialState> sinr_states{{0.001, 1900.0}, {0.002, 1000.0}, {0.003, 600.0}};
    /// Extreme load of the success-rate experiment.
    double success_beta_s = 3e-1;
    double success_lambda_u = 1.0 / 60.0;
    std::vector<double> success_energies{0.001, 0.002, 0.003};
    std::vector<double> success_packet_bits{600.0, 800.0, 1000.0, 1200.0, 1400.0, 1600.0, 1800.0};
    std::vector<double> success_distances{1.0, 20.0 / 3.0, 20.0};
    std::int64_t fading_draws = 10000;
    std::int64_t mc_trials = 100000;

    friend bool operator==(const ExperimentSettings&, const ExperimentSettings&) = default;
};

/// Link-budget constants that are not part of the other model types.
struct LinkSettings
{
    double n0_dbm_per_hz = -174.0;
    double bandwidth_hz = 15000.0;

    friend bool operator==(const LinkSettings&, const LinkSettings&) = default;
};

struct ExperimentConfig
{
    NetworkGeometry geom;
    TrafficSpec traffic;
    TransportConfig transport;
    LinkSettings link;
    StateGrid grid;
    SolverSettings solver;
    ExperimentSettings experiment;

    /// Throws ConfigError naming the first violated constraint.
    void validate() const;
    LinkParams link_params() const;
};

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

/// INI-style file with sections geometry, traffic, transport, link, grid,
/// solver, experiment. Missing keys keep their defaults.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text);

/// Canonical text form; parse_config(format_config(c)) == c.
std::string format_config(const ExperimentConfig& cfg);

/// Decimal or "a/b" fraction; errors name `label`.
double parse_number(const std::string& label, const std::string& text);

} // namespace nbmf
