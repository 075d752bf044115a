#pragma once

#include <stdexcept>
#include <vector>

#include "nbmf/grid.hpp"
#include "nbmf/link_budget.hpp"
#include "nbmf/phy_rate.hpp"
#include "nbmf/spatial_model.hpp"
#include "nbmf/traffic_model.hpp"

namespace nbmf {

struct SolverSettings
{
    double tol = 1e-6;          ///< sup-norm relative change threshold
    int max_iters = 200;
    double relaxation = 0.5;    ///< omega in (0, 1]; 1 is the undamped sweep
    double p_max = 0.025;       ///< W
    double source_scale = 1.0;  ///< arrival intensity lambda / c, 1/s

    void validate() const;
};

/// Relative sup-norm changes of one iteration.
struct IterationErrors
{
    double power = 0.0;
    double mean_field = 0.0;
    double multiplier = 0.0;

    double max() const;
};

struct EquilibriumSolution
{
    StateGrid grid;
    GridField p_star;
    GridField m_star;
    GridField mu_star;
    double i_mf = 0.0;        ///< W
    double mean_power = 0.0;  ///< integral of p* m*, W
    int iterations = 0;
    std::vector<IterationErrors> trace;
    double r_tr = 0.0;        ///< bit/s
    double p_max = 0.0;       ///< W
    double gfactor = 0.0;
    double sigma2 = 0.0;
};

/// Algorithm did not reach the tolerance; carries the error history.
class ConvergenceError : public std::runtime_error
{
  public:
    explicit ConvergenceError(std::vector<IterationErrors> trace);

    const std::vector<IterationErrors>& trace() const { return trace_; }
    /// Last error exceeds the first one.
    bool diverged() const;

  private:
    std::vector<IterationErrors> trace_;
};

/// Everything the fixed-point iteration needs once the model inputs have
/// been reduced to numbers.
struct EquilibriumProblem
{
    StateGrid grid;
    SolverSettings settings;
    LinkParams link;
    GridField source;     ///< arrival density m_s (unscaled)
    double r_tr = 0.0;    ///< bit/s
    double gfactor = 0.0; ///< geometric interference factor
    double sigma2 = 1.0;  ///< outdoor Rayleigh scale

    void validate() const;
};

/// Arrival-state density f_B x f_E at the grid nodes (per J per bit).
GridField build_source(const StateGrid& grid, const TrafficSpec& spec);

/// Upwind stationary transport solve, marched from the (e_max, b_max)
/// corner with m = 0 on the i = nx and j = ny edges.
GridField fpk_sweep(const GridField& p, const GridField& source, double r_tr,
                    const StateGrid& grid, const SolverSettings& settings);

/// Scale m to unit rectangle-rule mass.
GridField normalize(const GridField& m, const StateGrid& grid);

/// 2 sigma2^2 * gfactor * integral(p m).
double mean_field_interference(const GridField& p, const GridField& m, double gfactor,
                               double sigma2, const StateGrid& grid);

/// Discretized utility F(p_ij, I_mf) on the grid.
GridField utility_field(const GridField& p, double i_mf, const LinkParams& link);

/// Adjoint solve, marched from the (0, 0) corner with mu = 0 on the i = 0
/// and j = 0 edges.
GridField adjoint_sweep(const GridField& p, double i_mf, double r_tr, const StateGrid& grid,
                        const LinkParams& link);

/// Backward difference -(mu_ij - mu_{i-1,j}) / de; column i = 0 copies i = 1.
GridField energy_gradient(const GridField& mu, const StateGrid& grid);

/// Closed-form stationarity solve clamped to [0, p_max], then relaxed
/// against the previous policy.
GridField power_update(const GridField& p, const GridField& mu, double i_mf,
                       const LinkParams& link, const SolverSettings& settings,
                       const StateGrid& grid);

struct IterateState
{
    GridField p;
    GridField m;
    GridField mu;
    double i_mf = 0.0;
};

/// One pass of fpk -> normalize -> interference -> adjoint -> power.
IterateState iterate_once(const EquilibriumProblem& problem, const GridField& p);

EquilibriumSolution solve_equilibrium(const EquilibriumProblem& problem);

/// Reduces the model inputs to an EquilibriumProblem and solves it.
EquilibriumProblem make_problem(const StateGrid& grid, const SolverSettings& settings,
                                const NetworkGeometry& geom, const TrafficSpec& spec,
                                const TransportConfig& cfg, const LinkParams& link);

EquilibriumSolution solve_equilibrium(const StateGrid& grid, const SolverSettings& settings,
                                      const NetworkGeometry& geom, const TrafficSpec& spec,
                                      const TransportConfig& cfg, const LinkParams& link);

} // namespace nbmf
