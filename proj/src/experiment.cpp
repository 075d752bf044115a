#include "nbmf/experiment.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include <boost/algorithm/string.hpp>
#include <fmt/format.h>

#include "nbmf/errors.hpp"
#include "nbmf/link_metrics.hpp"

namespace nbmf {

void SolutionStore::add(const std::string& key, EquilibriumSolution sol)
{
    solutions_.insert_or_assign(key, std::move(sol));
}

const EquilibriumSolution* SolutionStore::find(const std::string& key) const
{
    auto it = solutions_.find(key);
    return it == solutions_.end() ? nullptr : &it->second;
}

std::string solution_key(const ExperimentConfig& cfg)
{
    ExperimentConfig model = cfg;
    model.experiment = ExperimentSettings{};
    std::string text = format_config(model);
    return text.substr(0, text.find("[experiment]"));
}

EquilibriumSolution solve_point(const ExperimentConfig& cfg, const SolutionStore* store)
{
    if (store != nullptr)
    {
        if (const auto* sol = store->find(solution_key(cfg)))
        {
            return *sol;
        }
    }
    return solve_equilibrium(cfg.grid, cfg.solver, cfg.geom, cfg.traffic, cfg.transport,
                             cfg.link_params());
}

namespace {

/// Runs fn(0..n-1) on up to `jobs` threads. Results land by index, so the
/// output does not depend on scheduling.
template <class T>
std::vector<T> parallel_map(std::size_t n, int jobs, const std::function<T(std::size_t)>& fn)
{
    std::vector<std::optional<T>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < n; k = next++)
        {
            try
            {
                slots[k].emplace(fn(k));
            }
            catch (...)
            {
                errors[k] = std::current_exception();
            }
        }
    };
    std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
    if (threads <= 1)
    {
        worker();
    }
    else
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t)
        {
            pool.emplace_back(worker);
        }
    }
    for (auto& e : errors)
    {
        if (e)
        {
            std::rethrow_exception(e);
        }
    }
    std::vector<T> out;
    out.reserve(n);
    for (auto& s : slots)
    {
        out.push_back(std::move(*s));
    }
    return out;
}

constexpr double kPerKm2 = 1e6;
const double kNan = std::numeric_limits<double>::quiet_NaN();

nlohmann::json solution_facts(const EquilibriumSolution& sol)
{
    nlohmann::json facts = {{"iterations", sol.iterations}, {"i_mf_w", sol.i_mf}};
    if (!sol.trace.empty())
    {
        const auto& last = sol.trace.back();
        facts["final_errors"] = {{"power", last.power},
                                 {"mean_field", last.mean_field},
                                 {"multiplier", last.multiplier}};
    }
    return facts;
}

/// Outcome of solving one sweep point; unstable and non-converged points
/// are reported, not thrown.
struct PointOutcome
{
    std::optional<EquilibriumSolution> sol;
    std::string status = "ok";
    double rho = kNan;
};

PointOutcome try_solve(const ExperimentConfig& point, const SolutionStore* store)
{
    PointOutcome out;
    out.rho = queue_load(point.traffic, point.transport).rho;
    try
    {
        out.sol = solve_point(point, store);
        if (QueueLoad{out.rho}.near_saturation())
        {
            out.status = "near_saturation";
        }
    }
    catch (const UnstableQueueError&)
    {
        out.status = "unstable";
    }
    catch (const ConvergenceError&)
    {
        out.status = "not_converged";
    }
    return out;
}

nlohmann::json outcome_json(const PointOutcome& o, nlohmann::json label)
{
    label["status"] = o.status;
    label["load_rho"] = o.rho;
    if (o.sol)
    {
        label.update(solution_facts(*o.sol));
    }
    return label;
}

} // namespace

ExperimentResult run_convergence(const ExperimentConfig& cfg)
{
    const auto& densities = cfg.experiment.convergence_beta_s;
    auto solutions = parallel_map<EquilibriumSolution>(
        densities.size(), cfg.experiment.jobs, [&](std::size_t k) {
            ExperimentConfig point = cfg;
            point.geom.beta_s = densities[k];
            return solve_point(point);
        });

    ExperimentResult res;
    res.table.header = {"beta_s_per_km2", "iteration", "log10_err_power", "log10_err_mean_field",
                        "log10_err_multiplier"};
    for (std::size_t k = 0; k < densities.size(); ++k)
    {
        const auto& sol = solutions[k];
        for (std::size_t it = 0; it < sol.trace.size(); ++it)
        {
            const auto& e = sol.trace[it];
            res.table.add_row({cell(densities[k] * kPerKm2), cell(static_cast<int>(it + 1)),
                               cell(std::log10(e.power)), cell(std::log10(e.mean_field)),
                               cell(std::log10(e.multiplier))});
        }
        auto facts = solution_facts(sol);
        facts["beta_s_per_km2"] = densities[k] * kPerKm2;
        res.points.push_back(facts);
    }
    return res;
}

ExperimentResult run_interference_sweep(const ExperimentConfig& cfg, SweepAxis axis,
                                        const std::vector<double>& arrival_rates)
{
    std::vector<double> values;
    if (axis == SweepAxis::beta_s)
    {
        values = cfg.experiment.beta_s_sweep;
    }
    else
    {
        for (int m : cfg.experiment.mcs_sweep)
        {
            values.push_back(m);
        }
    }
    std::vector<ExperimentConfig> points;
    for (double v : values)
    {
        for (double lam : arrival_rates)
        {
            ExperimentConfig point = cfg;
            if (axis == SweepAxis::beta_s)
            {
                point.geom.beta_s = v;
            }
            else
            {
                point.transport.mcs_level = static_cast<int>(v);
                point.transport.validate();
            }
            point.traffic.lambda_u = lam;
            points.push_back(point);
        }
    }
    auto outcomes = parallel_map<PointOutcome>(points.size(), cfg.experiment.jobs,
                                               [&](std::size_t k) { return try_solve(points[k], nullptr); });

    ExperimentResult res;
    std::string axis_name = axis == SweepAxis::beta_s ? "beta_s_per_km2" : "mcs";
    res.table.header = {axis_name, "lambda_u", "i_mf_w", "iterations", "load_rho", "status"};
    for (std::size_t k = 0; k < points.size(); ++k)
    {
        const auto& p = points[k];
        const auto& o = outcomes[k];
        std::string axis_cell = axis == SweepAxis::beta_s ? cell(p.geom.beta_s * kPerKm2)
                                                          : cell(p.transport.mcs_level);
        res.table.add_row({axis_cell, cell(p.traffic.lambda_u), cell(o.sol ? o.sol->i_mf : kNan),
                           cell(o.sol ? o.sol->iterations : 0), cell(o.rho), o.status});
        nlohmann::json label = {{"lambda_u", p.traffic.lambda_u}};
        label[axis_name] = axis == SweepAxis::beta_s ? p.geom.beta_s * kPerKm2
                                                     : static_cast<double>(p.transport.mcs_level);
        res.points.push_back(outcome_json(o, label));
    }
    return res;
}

SinrResult run_sinr_experiments(const ExperimentConfig& cfg, const SolutionStore* store)
{
    const auto& x = cfg.experiment;
    SinrResult out;

    // Distance table, one solve per MCS level.
    std::vector<ExperimentConfig> mcs_points;
    for (int m : x.mcs_sweep)
    {
        ExperimentConfig point = cfg;
        point.transport.mcs_level = m;
        point.transport.validate();
        mcs_points.push_back(point);
    }
    auto mcs_solutions = parallel_map<EquilibriumSolution>(
        mcs_points.size(), x.jobs, [&](std::size_t k) { return solve_point(mcs_points[k], store); });

    auto& dist = out.by_distance;
    dist.table.header = {"distance_m", "mcs", "class", "e0_j", "b0_bits", "avg_sinr_db"};
    for (std::size_t k = 0; k < mcs_points.size(); ++k)
    {
        const auto& point = mcs_points[k];
        const auto& sol = mcs_solutions[k];
        LinkParams link = point.link_params();
        auto population = avg_sinr_vs_distance(sol, link, point.geom, x.distances);
        std::vector<Trajectory> trajectories;
        for (const auto& s : x.sinr_states)
        {
            trajectories.push_back(integrate_trajectory(s.e0, s.b0, sol, sol.r_tr, sol.grid));
        }
        for (std::size_t d = 0; d < x.distances.size(); ++d)
        {
            double r = x.distances[d];
            dist.table.add_row({cell(r), cell(point.transport.mcs_level), "population", "", "",
                                cell(population[d])});
            for (std::size_t s = 0; s < x.sinr_states.size(); ++s)
            {
                double db = trajectory_sinr_db(trajectories[s], r, sol.i_mf, link, point.geom);
                dist.table.add_row({cell(r), cell(point.transport.mcs_level), "state",
                                    cell(x.sinr_states[s].e0), cell(x.sinr_states[s].b0),
                                    cell(db)});
            }
        }
        auto facts = solution_facts(sol);
        facts["mcs"] = point.transport.mcs_level;
        facts["mean_power_sinr_db"] = mean_power_sinr_db(sol, link);
        dist.points.push_back(facts);
    }

    // Density table.
    std::vector<ExperimentConfig> points;
    for (double beta : x.beta_s_sweep)
    {
        for (double lam : x.lambda_u_sweep)
        {
            for (double rs : x.r_safe_sweep)
            {
                ExperimentConfig point = cfg;
                point.geom.beta_s = beta;
                point.traffic.lambda_u = lam;
                point.geom.r_safe = rs;
                points.push_back(point);
            }
        }
    }
    auto outcomes = parallel_map<PointOutcome>(points.size(), x.jobs,
                                               [&](std::size_t k) { return try_solve(points[k], store); });
    auto& dens = out.by_density;
    dens.table.header = {"beta_s_per_km2", "lambda_u", "r_safe_m", "avg_sinr_db", "i_mf_w",
                         "status"};
    for (std::size_t k = 0; k < points.size(); ++k)
    {
        const auto& p = points[k];
        const auto& o = outcomes[k];
        double db = o.sol ? avg_sinr_db(*o.sol, p.link_params()) : kNan;
        dens.table.add_row({cell(p.geom.beta_s * kPerKm2), cell(p.traffic.lambda_u),
                            cell(p.geom.r_safe), cell(db), cell(o.sol ? o.sol->i_mf : kNan),
                            o.status});
        auto facts = outcome_json(o, {{"beta_s_per_km2", p.geom.beta_s * kPerKm2},
                                      {"lambda_u", p.traffic.lambda_u},
                                      {"r_safe_m", p.geom.r_safe}});
        if (o.sol)
        {
            facts["mean_power_sinr_db"] = mean_power_sinr_db(*o.sol, p.link_params());
        }
        dens.points.push_back(facts);
    }
    return out;
}

ExperimentConfig success_point(const ExperimentConfig& cfg)
{
    ExperimentConfig point = cfg;
    point.geom.beta_s = cfg.experiment.success_beta_s;
    point.traffic.lambda_u = cfg.experiment.success_lambda_u;
    return point;
}

ExperimentResult run_success_rate(const ExperimentConfig& cfg, const SolutionStore* store)
{
    const auto& x = cfg.experiment;
    ExperimentConfig point = success_point(cfg);
    EquilibriumSolution sol = solve_point(point, store);
    LinkParams link = point.link_params();

    struct Row
    {
        double bits;
        double e0;
        double r;
    };
    std::vector<Row> rows;
    for (double bits : x.success_packet_bits)
    {
        for (double e0 : x.success_energies)
        {
            for (double r : x.success_distances)
            {
                rows.push_back({bits, e0, r});
            }
        }
    }
    auto estimates = parallel_map<SuccessEstimate>(rows.size(), x.jobs, [&](std::size_t k) {
        const auto& row = rows[k];
        return packet_success_rate(sol, link, point.geom, row.e0, row.bits, row.r,
                                   x.fading_draws, x.seed);
    });

    ExperimentResult res;
    res.table.header = {"packet_bits", "e0_j", "distance_m", "success_rate", "std_error", "draws"};
    for (std::size_t k = 0; k < rows.size(); ++k)
    {
        res.table.add_row({cell(rows[k].bits), cell(rows[k].e0), cell(rows[k].r),
                           cell(estimates[k].rate), cell(estimates[k].std_error),
                           cell(estimates[k].draws)});
    }
    auto facts = solution_facts(sol);
    facts["beta_s_per_km2"] = point.geom.beta_s * kPerKm2;
    facts["lambda_u"] = point.traffic.lambda_u;
    res.points.push_back(facts);
    return res;
}

ValidateResult run_validate(const ExperimentConfig& cfg, const SolutionStore* store)
{
    EquilibriumSolution sol = solve_point(cfg, store);
    McConfig mc;
    mc.trials = cfg.experiment.mc_trials;
    mc.rng_seed = cfg.experiment.seed;
    mc.geom = cfg.geom;
    mc.p_a = activity_probability(cfg.traffic, cfg.transport);
    mc.power_sampler = PowerSampler::from_solution(sol);
    mc.jobs = cfg.experiment.jobs;
    McEstimate est = sample_interference(mc);
    double z = (est.mean - sol.i_mf) / est.std_error;

    ValidateResult out;
    out.passed = std::abs(z) <= 3.0;
    auto& res = out.result;
    res.table.header = {"trials", "empirical_mean_w", "stderr_w", "analytic_w", "z_score"};
    res.table.add_row({cell(est.trials), cell(est.mean), cell(est.std_error), cell(sol.i_mf),
                       cell(z)});
    auto facts = solution_facts(sol);
    facts["z_score"] = z;
    facts["passed"] = out.passed;
    res.points.push_back(facts);
    return out;
}

nlohmann::json config_json(const ExperimentConfig& cfg)
{
    nlohmann::json out = nlohmann::json::object();
    std::istringstream in(format_config(cfg));
    std::string line;
    std::string section;
    while (std::getline(in, line))
    {
        boost::algorithm::trim(line);
        if (line.empty())
        {
            continue;
        }
        if (line.front() == '[')
        {
            section = line.substr(1, line.size() - 2);
            out[section] = nlohmann::json::object();
            continue;
        }
        auto eq = line.find('=');
        out[section][boost::algorithm::trim_copy(line.substr(0, eq))] =
            boost::algorithm::trim_copy(line.substr(eq + 1));
    }
    return out;
}

void write_outputs(const std::filesystem::path& out_dir, const std::string& name,
                   const ExperimentResult& result, const ExperimentConfig& cfg,
                   const std::string& command, double wall_seconds)
{
    write_file_atomic(out_dir / (name + ".csv"), result.table.str());
    nlohmann::json manifest = {
        {"command", command},
        {"csv", name + ".csv"},
        {"library_version", kLibraryVersion},
        {"seed", cfg.experiment.seed},
        {"wall_time_s", wall_seconds},
        {"config", config_json(cfg)},
        {"calibration",
         {{"l0", cfg.geom.path_loss.l0},
          {"eta", cfg.geom.eta},
          {"sigma1", cfg.geom.sigma1},
          {"sigma2", cfg.geom.sigma2}}},
        {"points", result.points},
    };
    write_file_atomic(out_dir / (name + ".manifest.json"), manifest.dump(2) + "\n");
}

} // namespace nbmf
