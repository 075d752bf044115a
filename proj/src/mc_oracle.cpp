#include "nbmf/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <span>
#include <thread>

#include "nbmf/errors.hpp"
#include "nbmf/rng.hpp"

namespace nbmf {

PowerSampler PowerSampler::constant(double p)
{
    return PowerSampler{{p}, {1.0}};
}

PowerSampler PowerSampler::from_solution(const EquilibriumSolution& sol)
{
    PowerSampler sampler;
    for (int i = 0; i < sol.grid.nx; ++i)
    {
        for (int j = 0; j < sol.grid.ny; ++j)
        {
            double w = sol.m_star(i, j);
            if (w > 0.0)
            {
                sampler.powers.push_back(sol.p_star(i, j));
                sampler.weights.push_back(w);
            }
        }
    }
    return sampler;
}

void PowerSampler::validate() const
{
    if (powers.empty() || powers.size() != weights.size())
    {
        throw DomainError("power sampler: need matching, non-empty powers and weights");
    }
    for (std::size_t k = 0; k < powers.size(); ++k)
    {
        if (powers[k] < 0.0 || weights[k] < 0.0)
        {
            throw DomainError("power sampler: powers and weights must be >= 0");
        }
    }
}

double PowerSampler::mean() const
{
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    return std::inner_product(powers.begin(), powers.end(), weights.begin(), 0.0) / total;
}

void McConfig::validate() const
{
    if (trials < 1000)
    {
        throw DomainError("monte carlo: trials must be >= 1000");
    }
    if (p_a < 0.0 || p_a > 1.0)
    {
        throw DomainError("monte carlo: p_a outside [0, 1]");
    }
    if (!(near_radius > 0.0) || !(far_points > 0.0))
    {
        throw DomainError("monte carlo: near_radius and far_points must be > 0");
    }
    geom.validate();
    power_sampler.validate();
    if (min_interferer_distance(geom) >= geom.r_net)
    {
        throw DomainError("no interferer annulus: R_min >= r_net");
    }
}

namespace {

struct Shell
{
    double lo;
    double hi;
    double expected_count;  ///< after thinning
    double weight;          ///< 1 / thinning
};

struct TrialPlan
{
    double r_min;
    double r_max;
    std::vector<Shell> shells;
    PathLossModel kernel;
};

TrialPlan make_plan(const McConfig& cfg)
{
    const auto& geom = cfg.geom;
    TrialPlan plan;
    plan.r_min = min_interferer_distance(geom);
    plan.r_max = geom.r_net;
    plan.kernel = geom.path_loss;
    plan.kernel.l0 = 1.0;

    // Every SBS whose device can land in [r_min, r_max].
    double inner = std::max(0.0, plan.r_min - geom.r_s);
    double outer = plan.r_max + geom.r_s;
    double split = std::clamp(cfg.near_radius, inner, outer);
    double intensity = active_intensity(cfg.p_a, geom);
    auto area = [](double lo, double hi) { return std::numbers::pi * (hi * hi - lo * lo); };

    plan.shells.push_back({inner, split, intensity * area(inner, split), 1.0});
    double far_mean = intensity * area(split, outer);
    if (far_mean > 0.0)
    {
        double keep = std::min(1.0, cfg.far_points / far_mean);
        plan.shells.push_back({split, outer, far_mean * keep, 1.0 / keep});
    }
    return plan;
}

double run_trial(const McConfig& cfg, const TrialPlan& plan,
                 std::discrete_distribution<std::size_t>& power_index, std::int64_t trial)
{
    // Offset radius r_s * Beta(a, b), drawn as G_a / (G_a + G_b).
    std::gamma_distribution<double> ga(cfg.geom.beta_a, 1.0);
    std::gamma_distribution<double> gb(cfg.geom.beta_b, 1.0);
    SplitMix64 rng = SplitMix64::substream(cfg.rng_seed, static_cast<std::uint64_t>(trial));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double two_pi = 2.0 * std::numbers::pi;
    double total = 0.0;
    for (const auto& shell : plan.shells)
    {
        if (!(shell.expected_count > 0.0))
        {
            continue;
        }
        std::poisson_distribution<std::int64_t> count(shell.expected_count);
        std::int64_t n = count(rng);
        double lo2 = shell.lo * shell.lo;
        double span2 = shell.hi * shell.hi - lo2;
        for (std::int64_t k = 0; k < n; ++k)
        {
            double rz = std::sqrt(lo2 + uni(rng) * span2);
            double az = two_pi * uni(rng);
            double x_a = ga(rng);
            double x_b = gb(rng);
            double ro = cfg.geom.r_s * x_a / (x_a + x_b);
            double ao = two_pi * uni(rng);
            double x = rz * std::cos(az) + ro * std::cos(ao);
            double y = rz * std::sin(az) + ro * std::sin(ao);
            double d = std::hypot(x, y);
            double h2 = sample_outdoor_fading_power(rng, cfg.geom);
            double p = cfg.power_sampler.powers[power_index(rng)];
            if (d < plan.r_min || d > plan.r_max)
            {
                continue;
            }
            total += shell.weight * p * h2 * path_loss(d, plan.kernel);
        }
    }
    return total;
}

// Pairwise summation: result depends only on the values, not on how the
// trials were scheduled.
double pairwise_sum(std::span<const double> v)
{
    if (v.size() <= 8)
    {
        return std::accumulate(v.begin(), v.end(), 0.0);
    }
    std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

} // namespace

double sample_interference_trial(const McConfig& cfg, std::int64_t trial)
{
    TrialPlan plan = make_plan(cfg);
    std::discrete_distribution<std::size_t> power_index(cfg.power_sampler.weights.begin(),
                                                        cfg.power_sampler.weights.end());
    return run_trial(cfg, plan, power_index, trial);
}

McEstimate sample_interference(const McConfig& cfg)
{
    cfg.validate();
    McEstimate est;
    est.trials = cfg.trials;
    if (cfg.p_a == 0.0)
    {
        return est;
    }
    TrialPlan plan = make_plan(cfg);
    std::vector<double> values(static_cast<std::size_t>(cfg.trials));

    auto worker = [&](std::int64_t first, std::int64_t stride) {
        std::discrete_distribution<std::size_t> power_index(cfg.power_sampler.weights.begin(),
                                                            cfg.power_sampler.weights.end());
        for (std::int64_t t = first; t < cfg.trials; t += stride)
        {
            values[static_cast<std::size_t>(t)] = run_trial(cfg, plan, power_index, t);
        }
    };
    int jobs = std::max(1, cfg.jobs);
    if (jobs == 1)
    {
        worker(0, 1);
    }
    else
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < jobs; ++w)
        {
            pool.emplace_back(worker, w, jobs);
        }
    }

    double n = static_cast<double>(cfg.trials);
    est.mean = pairwise_sum(values) / n;
    for (double& v : values)
    {
        v = (v - est.mean) * (v - est.mean);
    }
    double variance = pairwise_sum(values) / (n - 1.0);
    est.std_error = std::sqrt(variance / n);
    return est;
}

double analytic_interference(const McConfig& cfg)
{
    return outdoor_fading_second_moment(cfg.geom) * geometric_factor(cfg.geom, cfg.p_a)
           * cfg.power_sampler.mean();
}

std::int64_t sample_device_count(const NetworkGeometry& geom, double region_radius,
                                 std::uint64_t seed)
{
    if (!(region_radius > 0.0))
    {
        throw DomainError("sample_device_count: region radius must be > 0");
    }
    SplitMix64 rng(seed);
    std::poisson_distribution<std::int64_t> sbs(geom.beta_s * std::numbers::pi * region_radius
                                                * region_radius);
    std::int64_t cells = sbs(rng);
    if (geom.beta_u <= 0.0)
    {
        return 0;
    }
    std::poisson_distribution<std::int64_t> per_cell(geom.beta_u);
    std::int64_t total = 0;
    for (std::int64_t c = 0; c < cells; ++c)
    {
        total += per_cell(rng);
    }
    return total;
}

} // namespace nbmf
