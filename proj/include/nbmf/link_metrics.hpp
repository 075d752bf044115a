#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "nbmf/link_budget.hpp"
#include "nbmf/mfg_solver.hpp"

namespace nbmf {

enum class ExitReason
{
    buffer_empty,
    energy_exhausted,
};

struct TrajectoryPoint
{
    double t;  ///< s
    double e;  ///< J
    double b;  ///< bits
    double p;  ///< W, held over [t, next t)
};

struct Trajectory
{
    double e0 = 0.0;
    double b0 = 0.0;
    std::vector<TrajectoryPoint> path;
    double exit_time = 0.0;
    ExitReason exit_reason = ExitReason::buffer_empty;
    double energy_used = 0.0;
};

class StalledTrajectoryError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Bilinear interpolation of a grid field, clamped to the domain.
double interpolate(const GridField& f, const StateGrid& grid, double e, double b);

/// Forward-Euler integration of de = -p* dt, db = -r_tr dt from (e0, b0).
/// The last step is shortened so the trajectory ends exactly on e = 0 or
/// b = 0; reaching both together counts as buffer_empty.
Trajectory integrate_trajectory(double e0, double b0, const EquilibriumSolution& sol,
                                double r_tr, const StateGrid& grid);

struct SuccessEstimate
{
    double rate = 0.0;
    double std_error = 0.0;
    std::int64_t draws = 0;
};

/// Fraction of block-fading draws for which the packet drains its buffer
/// under p* and the time-averaged spectral efficiency at distance r meets
/// r_tr / b_w.
SuccessEstimate packet_success_rate(const EquilibriumSolution& sol, const LinkParams& link,
                                    const NetworkGeometry& geom, double e0, double b0,
                                    double r, std::int64_t fading_draws, std::uint64_t seed);

/// SINR of transmit power p at serving distance r, linear.
double link_sinr(double p, double r, double i_mf, const LinkParams& link,
                 const NetworkGeometry& geom);

/// m*-weighted mean of the SINR in dB at each distance. Nodes with zero
/// power carry no SINR and are left out of the average.
std::vector<double> avg_sinr_vs_distance(const EquilibriumSolution& sol, const LinkParams& link,
                                         const NetworkGeometry& geom,
                                         const std::vector<double>& distances);

/// Time average of the SINR in dB along a trajectory at serving distance r.
/// Segments with zero power are left out.
double trajectory_sinr_db(const Trajectory& traj, double r, double i_mf, const LinkParams& link,
                          const NetworkGeometry& geom);

/// Same average at the mean serving distance (uses link.k_gain).
double avg_sinr_db(const EquilibriumSolution& sol, const LinkParams& link);

/// SINR of the mean power E_m*[p*] at the mean serving distance, in dB.
double mean_power_sinr_db(const EquilibriumSolution& sol, const LinkParams& link);

} // namespace nbmf
