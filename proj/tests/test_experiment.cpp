#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nbmf/experiment.hpp"

using namespace nbmf;
namespace fs = std::filesystem;

namespace {

std::string config_path()
{
    return std::string(NBMF_CONFIG_DIR) + "/table4.cfg";
}

std::string read_text(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string baseline_text()
{
    return read_text(config_path());
}

std::string replace(std::string text, const std::string& from, const std::string& to)
{
    auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

fs::path scratch_dir(const std::string& name)
{
    fs::path dir = fs::temp_directory_path() / ("nbmf_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Smaller sweeps so the experiment tests stay quick.
ExperimentConfig small_config()
{
    auto cfg = load_config(config_path());
    cfg.experiment.beta_s_sweep = {1e-3, 3e-1};
    cfg.experiment.mcs_sweep = {0, 8};
    cfg.experiment.distances = {1.0, 10.0, 20.0};
    cfg.experiment.success_energies = {0.002};
    cfg.experiment.success_packet_bits = {1000.0};
    cfg.experiment.success_distances = {20.0 / 3.0};
    cfg.experiment.fading_draws = 1000;
    cfg.experiment.mc_trials = 20000;
    return cfg;
}

} // namespace

TEST_CASE("baseline config parses")
{
    auto cfg = load_config(config_path());
    CHECK(cfg.geom.beta_s == 0.03);
    CHECK(cfg.geom.r_s == 20.0);
    CHECK(cfg.geom.path_loss.bands.size() == 4);
    CHECK(cfg.geom.path_loss.bands[3].exponent == 6.0);
    CHECK(cfg.traffic.lambda_u == 1.0 / 900.0);
    CHECK(cfg.traffic.beta_u == cfg.geom.beta_u);
    CHECK(cfg.transport.mcs_level == 8);
    CHECK(cfg.grid.nx == 50);
    CHECK(cfg.grid.ny == 200);
    CHECK(cfg.solver.p_max == 0.025);
    CHECK(cfg.experiment.beta_s_sweep.back() == 0.3);
    CHECK(cfg.experiment.sinr_states[1] == InitialState{0.002, 1000.0});
    CHECK(cfg.experiment.seed == 20240601u);
    CHECK(cfg.geom.path_loss.l0 == std::pow(10.0, -3.15));
}

TEST_CASE("config text round-trips")
{
    auto cfg = load_config(config_path());
    auto text = format_config(cfg);
    auto again = parse_config(text);
    CHECK(again == cfg);
    CHECK(format_config(again) == text);
}

TEST_CASE("densities take explicit units")
{
    auto text = baseline_text();
    CHECK(parse_config(replace(text, "beta_s = 30000 per_km2", "beta_s = 0.03 per_m2")).geom.beta_s
          == 0.03);
    CHECK_THROWS_WITH_AS(parse_config(replace(text, "beta_s = 30000 per_km2", "beta_s = 30000")),
                         doctest::Contains("geometry.beta_s"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(replace(text, "beta_s = 30000 per_km2", "beta_s = 30000 per_mi2")),
                         doctest::Contains("unknown unit"), ConfigError);
}

TEST_CASE("config rejections name the offending key")
{
    auto text = baseline_text();
    CHECK_THROWS_WITH_AS(parse_config(replace(text, "r_s = 20 m", "r_s = -20 m")),
                         doctest::Contains("r_s"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(replace(text, "eta = 1\n", "eta = 1\ngamma = 2\n")),
                         doctest::Contains("geometry.gamma: unknown key"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(text + "\n[extras]\nfoo = 1\n"),
                         doctest::Contains("extras: unknown section"), ConfigError);
    CHECK_THROWS_AS(parse_config(replace(text, "mcs = 8", "mcs = eight")), ConfigError);
    CHECK_THROWS_AS(parse_config(replace(text, "tones_per_ru = 1", "tones_per_ru = 5")), ConfigError);
    CHECK_THROWS_AS(parse_config(replace(text, "fading_draws = 10000", "fading_draws = 10")),
                    ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.cfg"), ConfigError);
}

TEST_CASE("csv formatting")
{
    CsvTable t;
    t.header = {"a", "b"};
    t.add_row({cell(0.1), cell(std::int64_t{7})});
    t.add_row({cell(1.0 / 3.0), cell(-2)});
    CHECK(t.str() == "a,b\n0.10000000000000001,7\n0.33333333333333331,-2\n");
    CHECK(t.str().find('\r') == std::string::npos);
    CHECK_THROWS(t.add_row({"only one"}));
    CHECK(std::stod(cell(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("atomic write leaves no temporary behind")
{
    auto dir = scratch_dir("atomic");
    write_file_atomic(dir / "x.csv", "first\n");
    write_file_atomic(dir / "x.csv", "second\n");
    CHECK(read_text(dir / "x.csv") == "second\n");
    int files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir))
    {
        ++files;
    }
    CHECK(files == 1);
    auto back = read_csv(dir / "x.csv");
    CHECK(back.header == std::vector<std::string>{"second"});
}

TEST_CASE("solution write and read are bit-exact")
{
    auto cfg = load_config(config_path());
    auto sol = solve_point(cfg);
    auto dir = scratch_dir("solution");
    write_solution(dir, sol, solution_key(cfg));
    CHECK(fs::exists(dir / "p_star.csv"));
    CHECK(fs::exists(dir / "m_star.csv"));
    CHECK(fs::exists(dir / "mu_star.csv"));
    std::string key;
    auto back = read_solution(dir, &key);
    CHECK(key == solution_key(cfg));
    CHECK(back.grid == sol.grid);
    CHECK(back.p_star == sol.p_star);
    CHECK(back.m_star == sol.m_star);
    CHECK(back.mu_star == sol.mu_star);
    CHECK(back.i_mf == sol.i_mf);
    CHECK(back.iterations == sol.iterations);
    CHECK(back.trace.size() == sol.trace.size());
    CHECK(back.r_tr == sol.r_tr);
    CHECK(back.gfactor == sol.gfactor);
}

TEST_CASE("solution key ignores experiment settings")
{
    auto a = load_config(config_path());
    auto b = a;
    b.experiment.seed = 5;
    b.experiment.mc_trials = 2000;
    CHECK(solution_key(a) == solution_key(b));
    b.geom.r_safe = 3.0;
    CHECK(solution_key(a) != solution_key(b));
}

TEST_CASE("stored solutions are reused")
{
    auto cfg = small_config();
    auto sol = solve_point(cfg);
    auto marked = sol;
    marked.i_mf *= 2.0;
    SolutionStore store;
    store.add(solution_key(cfg), marked);
    auto res = run_validate(cfg, &store);
    CHECK(res.result.table.rows.front()[3] == cell(marked.i_mf));
    auto fresh = run_validate(cfg, nullptr);
    CHECK(fresh.result.table.rows.front()[3] == cell(sol.i_mf));
}

TEST_CASE("interference sweep flags unstable points")
{
    auto cfg = small_config();
    auto res = run_interference_sweep(cfg, SweepAxis::mcs, {1.0 / 900.0, 1.0});
    REQUIRE(res.table.rows.size() == 4);
    CHECK(res.table.header.back() == "status");
    int unstable = 0;
    for (const auto& row : res.table.rows)
    {
        if (row.back() == "unstable")
        {
            ++unstable;
        }
        else
        {
            CHECK(row.back() == "ok");
        }
    }
    CHECK(unstable == 2);
}

TEST_CASE("interference grows with density")
{
    auto cfg = small_config();
    auto res = run_interference_sweep(cfg, SweepAxis::beta_s, {1.0 / 900.0});
    REQUIRE(res.table.rows.size() == 2);
    CHECK(std::stod(res.table.rows[1][2]) > std::stod(res.table.rows[0][2]));
}

TEST_CASE("experiments are deterministic and independent of the thread count")
{
    auto cfg = small_config();
    auto a = run_success_rate(cfg);
    cfg.experiment.jobs = 3;
    auto b = run_success_rate(cfg);
    CHECK(a.table.str() == b.table.str());
    auto s1 = run_sinr_experiments(cfg);
    cfg.experiment.jobs = 1;
    auto s2 = run_sinr_experiments(cfg);
    CHECK(s1.by_distance.table.str() == s2.by_distance.table.str());
    CHECK(s1.by_density.table.str() == s2.by_density.table.str());
}

TEST_CASE("monte carlo validation of the baseline point")
{
    auto cfg = small_config();
    auto res = run_validate(cfg);
    CHECK(res.passed);
    double z = std::stod(res.result.table.rows.front().back());
    CHECK(std::abs(z) <= 3.0);
}

TEST_CASE("outputs carry a manifest")
{
    auto cfg = small_config();
    auto dir = scratch_dir("outputs");
    auto res = run_convergence(cfg);
    write_outputs(dir, "convergence", res, cfg, "convergence", 0.5);
    auto manifest = nlohmann::json::parse(read_text(dir / "convergence.manifest.json"));
    CHECK(manifest["command"] == "convergence");
    CHECK(manifest["seed"] == cfg.experiment.seed);
    CHECK(manifest["library_version"] == kLibraryVersion);
    CHECK(manifest.contains("config"));
    CHECK(manifest.contains("calibration"));
    CHECK(read_csv(dir / "convergence.csv").header == res.table.header);
}
