#include "nbmf/link_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nbmf/errors.hpp"
#include "nbmf/rng.hpp"

namespace nbmf {

double interpolate(const GridField& f, const StateGrid& grid, double e, double b)
{
    double x = std::clamp(e / grid.de(), 0.0, static_cast<double>(grid.nx));
    double y = std::clamp(b / grid.db(), 0.0, static_cast<double>(grid.ny));
    int i = std::min(static_cast<int>(x), grid.nx - 1);
    int j = std::min(static_cast<int>(y), grid.ny - 1);
    double fx = x - i;
    double fy = y - j;
    return (1.0 - fx) * (1.0 - fy) * f(i, j) + fx * (1.0 - fy) * f(i + 1, j)
           + (1.0 - fx) * fy * f(i, j + 1) + fx * fy * f(i + 1, j + 1);
}

Trajectory integrate_trajectory(double e0, double b0, const EquilibriumSolution& sol,
                                double r_tr, const StateGrid& grid)
{
    if (!(e0 > 0.0) || e0 > grid.e_max || !(b0 > 0.0) || b0 > grid.b_max)
    {
        throw DomainError("trajectory: initial state outside the state domain");
    }
    if (!(r_tr > 0.0))
    {
        throw DomainError("trajectory: r_tr must be > 0");
    }
    const double dt = std::min(grid.de() / sol.p_max, grid.db() / r_tr) / 4.0;
    const double stall_window = 10.0 * b0 / r_tr;
    constexpr double kStallPower = 1e-12;

    Trajectory traj;
    traj.e0 = e0;
    traj.b0 = b0;
    double t = 0.0;
    double e = e0;
    double b = b0;
    double stalled_since = -1.0;
    while (true)
    {
        double p = std::max(0.0, interpolate(sol.p_star, grid, e, b));
        traj.path.push_back({t, e, b, p});

        if (p < kStallPower)
        {
            if (stalled_since < 0.0)
            {
                stalled_since = t;
            }
            else if (t - stalled_since > stall_window)
            {
                throw StalledTrajectoryError("stalled trajectory: zero power with energy and bits left");
            }
        }
        else
        {
            stalled_since = -1.0;
        }

        double to_empty = b / r_tr;
        double to_exhaust = p > 0.0 ? e / p : std::numeric_limits<double>::infinity();
        double step = std::min({dt, to_empty, to_exhaust});
        t += step;
        traj.energy_used += p * step;
        if (step == to_empty)
        {
            e = std::max(0.0, e - p * step);
            b = 0.0;
            traj.exit_reason = ExitReason::buffer_empty;
            break;
        }
        if (step == to_exhaust)
        {
            e = 0.0;
            b -= r_tr * step;
            traj.exit_reason = ExitReason::energy_exhausted;
            break;
        }
        e -= p * step;
        b -= r_tr * step;
    }
    traj.path.push_back({t, e, b, 0.0});
    traj.exit_time = t;
    return traj;
}

double link_sinr(double p, double r, double i_mf, const LinkParams& link,
                 const NetworkGeometry& geom)
{
    double gain = indoor_fading_second_moment(geom) * path_loss(r, geom.path_loss);
    return p * gain / (link.noise_power() + i_mf);
}

SuccessEstimate packet_success_rate(const EquilibriumSolution& sol, const LinkParams& link,
                                    const NetworkGeometry& geom, double e0, double b0,
                                    double r, std::int64_t fading_draws, std::uint64_t seed)
{
    if (fading_draws < 100)
    {
        throw DomainError("packet_success_rate: at least 100 fading draws required");
    }
    if (!(r > 0.0) || r > geom.r_s)
    {
        throw DomainError("packet_success_rate: distance outside (0, r_s]");
    }
    Trajectory traj = integrate_trajectory(e0, b0, sol, sol.r_tr, sol.grid);
    SuccessEstimate est;
    est.draws = fading_draws;
    if (traj.exit_reason != ExitReason::buffer_empty)
    {
        return est;
    }

    const double threshold = sol.r_tr / link.b_w;
    const double snr_per_watt = path_loss(r, geom.path_loss) / (link.noise_power() + sol.i_mf);
    std::int64_t successes = 0;
    for (std::int64_t k = 0; k < fading_draws; ++k)
    {
        SplitMix64 rng = SplitMix64::substream(seed, static_cast<std::uint64_t>(k));
        double h2 = sample_indoor_fading_power(rng, geom);
        double bits_per_hz = 0.0;
        for (std::size_t s = 0; s + 1 < traj.path.size(); ++s)
        {
            double span = traj.path[s + 1].t - traj.path[s].t;
            bits_per_hz += std::log2(1.0 + traj.path[s].p * h2 * snr_per_watt) * span;
        }
        if (bits_per_hz >= threshold * traj.exit_time)
        {
            ++successes;
        }
    }
    double n = static_cast<double>(fading_draws);
    est.rate = static_cast<double>(successes) / n;
    est.std_error = std::sqrt(est.rate * (1.0 - est.rate) / n);
    return est;
}

namespace {

double weighted_db_average(const EquilibriumSolution& sol, double gain_over_noise)
{
    const auto& grid = sol.grid;
    double sum = 0.0;
    double weight = 0.0;
    for (int i = 0; i < grid.nx; ++i)
    {
        for (int j = 0; j < grid.ny; ++j)
        {
            double w = sol.m_star(i, j);
            double p = sol.p_star(i, j);
            if (w <= 0.0 || p <= 0.0)
            {
                continue;
            }
            sum += w * to_db(p * gain_over_noise);
            weight += w;
        }
    }
    if (!(weight > 0.0))
    {
        throw DegenerateMeanFieldError("SINR average: no transmitting mass");
    }
    return sum / weight;
}

} // namespace

std::vector<double> avg_sinr_vs_distance(const EquilibriumSolution& sol, const LinkParams& link,
                                         const NetworkGeometry& geom,
                                         const std::vector<double>& distances)
{
    std::vector<double> out;
    out.reserve(distances.size());
    for (double r : distances)
    {
        if (!(r > 0.0) || r > geom.r_s)
        {
            throw DomainError("avg_sinr_vs_distance: distance outside (0, r_s]");
        }
        out.push_back(weighted_db_average(sol, link_sinr(1.0, r, sol.i_mf, link, geom)));
    }
    return out;
}

double trajectory_sinr_db(const Trajectory& traj, double r, double i_mf, const LinkParams& link,
                          const NetworkGeometry& geom)
{
    double unit = link_sinr(1.0, r, i_mf, link, geom);
    double sum = 0.0;
    double span = 0.0;
    for (std::size_t s = 0; s + 1 < traj.path.size(); ++s)
    {
        double p = traj.path[s].p;
        double dt = traj.path[s + 1].t - traj.path[s].t;
        if (p <= 0.0 || dt <= 0.0)
        {
            continue;
        }
        sum += to_db(p * unit) * dt;
        span += dt;
    }
    if (!(span > 0.0))
    {
        throw DegenerateMeanFieldError("trajectory SINR: no transmitting segment");
    }
    return sum / span;
}

double avg_sinr_db(const EquilibriumSolution& sol, const LinkParams& link)
{
    return weighted_db_average(sol, mf_sinr(1.0, sol.i_mf, link));
}

double mean_power_sinr_db(const EquilibriumSolution& sol, const LinkParams& link)
{
    return to_db(mf_sinr(sol.mean_power, sol.i_mf, link));
}

} // namespace nbmf
