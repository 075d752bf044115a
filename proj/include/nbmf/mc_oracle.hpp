#pragma once

#include <cstdint>
#include <vector>

#include "nbmf/mfg_solver.hpp"
#include "nbmf/spatial_model.hpp"

namespace nbmf {

/// Discrete law of an interferer's transmit power: value p_k with
/// probability weight_k / sum(weight).
struct PowerSampler
{
    std::vector<double> powers;
    std::vector<double> weights;

    static PowerSampler constant(double p);
    /// Nodes of (p*, m*) weighted by m* over the rectangle-rule cells.
    static PowerSampler from_solution(const EquilibriumSolution& sol);

    void validate() const;
    double mean() const;
};

struct McConfig
{
    std::int64_t trials = 100000;
    std::uint64_t rng_seed = 1;
    NetworkGeometry geom;
    double p_a = 0.0;
    PowerSampler power_sampler;
    /// SBSs farther than this are simulated with importance thinning.
    double near_radius = 100.0;
    /// Expected number of thinned far-field SBSs per trial.
    double far_points = 10.0;
    int jobs = 1;

    void validate() const;
};

struct McEstimate
{
    double mean = 0.0;       ///< W
    double std_error = 0.0;  ///< W
    std::int64_t trials = 0;
};

/// Empirical mean interference at the origin SBS from one active device
/// per thinned SBS. Interfering links use the unit-gain kernel r^-alpha(r)
/// and Rayleigh fading, matching the analytic mean-field interference.
McEstimate sample_interference(const McConfig& cfg);

/// Interference of one trial (exposed for reproducibility tests).
double sample_interference_trial(const McConfig& cfg, std::int64_t trial);

/// Analytic counterpart: 2 sigma2^2 * geometric_factor * E[p].
double analytic_interference(const McConfig& cfg);

/// Devices in a disc of the given radius: Poisson(beta_u) per SBS of a
/// PPP(beta_s).
std::int64_t sample_device_count(const NetworkGeometry& geom, double region_radius,
                                 std::uint64_t seed);

} // namespace nbmf
