#pragma once

#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "nbmf/config.hpp"
#include "nbmf/io.hpp"
#include "nbmf/mc_oracle.hpp"

namespace nbmf {

/// Solved equilibria indexed by solution_key, so a `solve` run can be fed
/// to later experiments without re-solving.
class SolutionStore
{
  public:
    void add(const std::string& key, EquilibriumSolution sol);
    const EquilibriumSolution* find(const std::string& key) const;

  private:
    std::map<std::string, EquilibriumSolution> solutions_;
};

/// Canonical text of the model-relevant part of a config.
std::string solution_key(const ExperimentConfig& cfg);

/// Solves (or fetches from the store) the equilibrium of one config.
EquilibriumSolution solve_point(const ExperimentConfig& cfg, const SolutionStore* store = nullptr);

/// A CSV with per-point solver facts for the manifest.
struct ExperimentResult
{
    CsvTable table;
    nlohmann::json points = nlohmann::json::array();
};

enum class SweepAxis
{
    beta_s,
    mcs,
};

ExperimentResult run_convergence(const ExperimentConfig& cfg);

/// I*_mf over (axis value, lambda_u). Points whose queue is unstable are
/// kept as rows with status "unstable".
ExperimentResult run_interference_sweep(const ExperimentConfig& cfg, SweepAxis axis,
                                        const std::vector<double>& arrival_rates);

struct SinrResult
{
    /// (distance, mcs, state class) -> dB.
    ExperimentResult by_distance;
    /// (beta_s, lambda_u, r_safe) -> dB at the mean serving distance.
    ExperimentResult by_density;
};

SinrResult run_sinr_experiments(const ExperimentConfig& cfg, const SolutionStore* store = nullptr);

/// Config of the extreme-load success experiment.
ExperimentConfig success_point(const ExperimentConfig& cfg);

ExperimentResult run_success_rate(const ExperimentConfig& cfg,
                                  const SolutionStore* store = nullptr);

struct ValidateResult
{
    ExperimentResult result;
    bool passed = false;
};

/// Analytic vs Monte-Carlo interference; passes when |z| <= 3.
ValidateResult run_validate(const ExperimentConfig& cfg, const SolutionStore* store = nullptr);

/// Writes <name>.csv and <name>.manifest.json into out_dir.
void write_outputs(const std::filesystem::path& out_dir, const std::string& name,
                   const ExperimentResult& result, const ExperimentConfig& cfg,
                   const std::string& command, double wall_seconds);

nlohmann::json config_json(const ExperimentConfig& cfg);

inline constexpr const char* kLibraryVersion = "1.0.0";

} // namespace nbmf
