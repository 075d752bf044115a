// Command-line front end for the equilibrium solver and the figure
// experiments. Every subcommand writes CSV files plus a JSON manifest.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nbmf/experiment.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOptions
{
    std::string config;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::vector<std::string> solutions;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_solution)
{
    cmd->add_option("--config", opt.config, "config file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", opt.out, "output directory")->capture_default_str();
    cmd->add_option("--seed", opt.seed, "override experiment.seed");
    cmd->add_option("--jobs", opt.jobs, "concurrent sweep points")->check(CLI::PositiveNumber);
    if (with_solution)
    {
        cmd->add_option("--solution", opt.solutions, "directory written by `solve` (repeatable)")
            ->check(CLI::ExistingDirectory);
    }
}

nbmf::ExperimentConfig load(const CommonOptions& opt)
{
    nbmf::ExperimentConfig cfg = nbmf::load_config(opt.config);
    if (opt.seed)
    {
        cfg.experiment.seed = *opt.seed;
    }
    if (opt.jobs)
    {
        cfg.experiment.jobs = *opt.jobs;
    }
    return cfg;
}

nbmf::SolutionStore load_store(const CommonOptions& opt)
{
    nbmf::SolutionStore store;
    for (const auto& dir : opt.solutions)
    {
        std::string key;
        auto sol = nbmf::read_solution(dir, &key);
        store.add(key, std::move(sol));
    }
    return store;
}

class Stopwatch
{
  public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Mean-field power control for NB-IoT small cells"};
    app.require_subcommand(1);

    CommonOptions solve_opt;
    std::string solve_point = "base";
    auto* solve = app.add_subcommand("solve", "solve one equilibrium and export p*, m*, mu*");
    add_common(solve, solve_opt, false);
    solve->add_option("--point", solve_point, "base | success (extreme-load config)")
        ->check(CLI::IsMember({"base", "success"}))
        ->capture_default_str();

    CommonOptions conv_opt;
    auto* convergence = app.add_subcommand("convergence", "per-iteration error traces");
    add_common(convergence, conv_opt, false);

    CommonOptions sweep_opt;
    std::string axis = "beta_s";
    std::vector<std::string> arrival_rates;
    auto* sweep = app.add_subcommand("sweep-interference", "I*_mf over density or MCS");
    add_common(sweep, sweep_opt, false);
    sweep->add_option("--axis", axis, "beta_s | mcs")
        ->check(CLI::IsMember({"beta_s", "mcs"}))
        ->capture_default_str();
    sweep->add_option("--arrival-rates", arrival_rates,
                      "lambda_u values, packets/s, fractions allowed (default experiment.lambda_u_sweep)");

    CommonOptions sinr_opt;
    auto* sinr = app.add_subcommand("sinr", "average SINR vs distance and vs density");
    add_common(sinr, sinr_opt, true);

    CommonOptions succ_opt;
    auto* success = app.add_subcommand("success", "packet success rate at extreme load");
    add_common(success, succ_opt, true);

    CommonOptions val_opt;
    auto* validate = app.add_subcommand("validate", "analytic vs Monte-Carlo interference");
    add_common(validate, val_opt, true);

    CLI11_PARSE(app, argc, argv);

    try
    {
        Stopwatch clock;
        if (solve->parsed())
        {
            auto cfg = load(solve_opt);
            auto point = solve_point == "success" ? nbmf::success_point(cfg) : cfg;
            auto sol = nbmf::solve_point(point);
            fs::path dir = fs::path(solve_opt.out) / ("solution_" + solve_point);
            nbmf::write_solution(dir, sol, nbmf::solution_key(point));
            nbmf::ExperimentResult res;
            res.table.header = {"iteration", "err_power", "err_mean_field", "err_multiplier"};
            for (std::size_t k = 0; k < sol.trace.size(); ++k)
            {
                const auto& e = sol.trace[k];
                res.table.add_row({nbmf::cell(static_cast<int>(k + 1)), nbmf::cell(e.power),
                                   nbmf::cell(e.mean_field), nbmf::cell(e.multiplier)});
            }
            res.points.push_back({{"iterations", sol.iterations}, {"i_mf_w", sol.i_mf},
                                  {"trace", nbmf::trace_json(sol.trace)}});
            nbmf::write_outputs(dir, "trace", res, point, "solve", clock.seconds());
            fmt::print("solved in {} iterations, I_mf = {:.6g} W -> {}\n", sol.iterations,
                       sol.i_mf, dir.string());
        }
        else if (convergence->parsed())
        {
            auto cfg = load(conv_opt);
            auto res = nbmf::run_convergence(cfg);
            nbmf::write_outputs(conv_opt.out, "convergence", res, cfg, "convergence",
                                clock.seconds());
        }
        else if (sweep->parsed())
        {
            auto cfg = load(sweep_opt);
            std::vector<double> rates = cfg.experiment.lambda_u_sweep;
            if (!arrival_rates.empty())
            {
                rates.clear();
                for (const auto& r : arrival_rates)
                {
                    rates.push_back(nbmf::parse_number("--arrival-rates", r));
                }
            }
            auto ax = axis == "mcs" ? nbmf::SweepAxis::mcs : nbmf::SweepAxis::beta_s;
            auto res = nbmf::run_interference_sweep(cfg, ax, rates);
            nbmf::write_outputs(sweep_opt.out, "interference_" + axis, res, cfg,
                                "sweep-interference", clock.seconds());
        }
        else if (sinr->parsed())
        {
            auto cfg = load(sinr_opt);
            auto store = load_store(sinr_opt);
            auto res = nbmf::run_sinr_experiments(cfg, &store);
            double t = clock.seconds();
            nbmf::write_outputs(sinr_opt.out, "sinr_distance", res.by_distance, cfg, "sinr", t);
            nbmf::write_outputs(sinr_opt.out, "sinr_density", res.by_density, cfg, "sinr", t);
        }
        else if (success->parsed())
        {
            auto cfg = load(succ_opt);
            auto store = load_store(succ_opt);
            auto res = nbmf::run_success_rate(cfg, &store);
            nbmf::write_outputs(succ_opt.out, "success_rate", res, cfg, "success",
                                clock.seconds());
        }
        else if (validate->parsed())
        {
            auto cfg = load(val_opt);
            auto store = load_store(val_opt);
            auto res = nbmf::run_validate(cfg, &store);
            nbmf::write_outputs(val_opt.out, "validate", res.result, cfg, "validate",
                                clock.seconds());
            const auto& row = res.result.table.rows.front();
            fmt::print("z = {} ({})\n", row.back(), res.passed ? "ok" : "FAILED, |z| > 3");
            return res.passed ? 0 : 1;
        }
    }
    catch (const std::exception& e)
    {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    }
    return 0;
}
