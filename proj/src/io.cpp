#include "nbmf/io.hpp"

#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

namespace nbmf {

void CsvTable::add_row(std::vector<std::string> row)
{
    if (row.size() != header.size())
    {
        throw std::logic_error("csv: row width does not match header");
    }
    rows.push_back(std::move(row));
}

std::string CsvTable::str() const
{
    std::string out = fmt::format("{}\n", fmt::join(header, ","));
    for (const auto& row : rows)
    {
        out += fmt::format("{}\n", fmt::join(row, ","));
    }
    return out;
}

std::string cell(double v)
{
    return fmt::format("{:.17g}", v);
}

std::string cell(std::int64_t v)
{
    return std::to_string(v);
}

std::string cell(int v)
{
    return std::to_string(v);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path())
    {
        std::filesystem::create_directories(path.parent_path());
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
        {
            throw std::runtime_error(fmt::format("{}: cannot open for writing", tmp.string()));
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out.flush())
        {
            throw std::runtime_error(fmt::format("{}: write failed", tmp.string()));
        }
    }
    std::filesystem::rename(tmp, path);
}

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw std::runtime_error(fmt::format("{}: cannot open", path.string()));
    }
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line))
    {
        if (line.empty())
        {
            continue;
        }
        std::vector<std::string> cells;
        boost::algorithm::split(cells, line, boost::is_any_of(","));
        if (first)
        {
            table.header = std::move(cells);
            first = false;
        }
        else
        {
            table.add_row(std::move(cells));
        }
    }
    return table;
}

CsvTable field_table(const GridField& f, const StateGrid& grid)
{
    CsvTable t;
    t.header = {"i", "j", "e_joules", "b_bits", "value"};
    for (int i = 0; i <= grid.nx; ++i)
    {
        for (int j = 0; j <= grid.ny; ++j)
        {
            t.add_row({cell(i), cell(j), cell(grid.energy(i)), cell(grid.bits(j)), cell(f(i, j))});
        }
    }
    return t;
}

namespace {

GridField read_field(const std::filesystem::path& path, const StateGrid& grid, FieldRole role)
{
    CsvTable t = read_csv(path);
    GridField f(grid, role);
    if (t.rows.size() != static_cast<std::size_t>(grid.node_count()))
    {
        throw std::runtime_error(fmt::format("{}: expected {} nodes", path.string(),
                                             grid.node_count()));
    }
    for (const auto& row : t.rows)
    {
        int i = std::stoi(row[0]);
        int j = std::stoi(row[1]);
        if (i < 0 || i > grid.nx || j < 0 || j > grid.ny)
        {
            throw std::runtime_error(fmt::format("{}: node ({}, {}) off grid", path.string(), i, j));
        }
        f(i, j) = std::stod(row[4]);
    }
    return f;
}

} // namespace

nlohmann::json trace_json(const std::vector<IterationErrors>& trace)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : trace)
    {
        out.push_back({{"power", e.power}, {"mean_field", e.mean_field}, {"multiplier", e.multiplier}});
    }
    return out;
}

void write_solution(const std::filesystem::path& dir, const EquilibriumSolution& sol,
                    const std::string& key)
{
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "p_star.csv", field_table(sol.p_star, sol.grid).str());
    write_file_atomic(dir / "m_star.csv", field_table(sol.m_star, sol.grid).str());
    write_file_atomic(dir / "mu_star.csv", field_table(sol.mu_star, sol.grid).str());
    // Doubles go through text at 17 digits so they read back bit-exact.
    nlohmann::json meta = {
        {"config_key", key},
        {"grid", {{"e_max", cell(sol.grid.e_max)}, {"b_max", cell(sol.grid.b_max)},
                  {"nx", sol.grid.nx}, {"ny", sol.grid.ny}}},
        {"i_mf", cell(sol.i_mf)},
        {"mean_power", cell(sol.mean_power)},
        {"iterations", sol.iterations},
        {"r_tr", cell(sol.r_tr)},
        {"p_max", cell(sol.p_max)},
        {"gfactor", cell(sol.gfactor)},
        {"sigma2", cell(sol.sigma2)},
    };
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& e : sol.trace)
    {
        trace.push_back({cell(e.power), cell(e.mean_field), cell(e.multiplier)});
    }
    meta["trace"] = trace;
    write_file_atomic(dir / "solution.json", meta.dump(2) + "\n");
}

EquilibriumSolution read_solution(const std::filesystem::path& dir, std::string* key)
{
    std::ifstream in(dir / "solution.json", std::ios::binary);
    if (!in)
    {
        throw std::runtime_error(fmt::format("{}: no solution.json", dir.string()));
    }
    nlohmann::json meta = nlohmann::json::parse(in);
    auto num = [](const nlohmann::json& j) { return std::stod(j.get<std::string>()); };

    StateGrid grid;
    grid.e_max = num(meta["grid"]["e_max"]);
    grid.b_max = num(meta["grid"]["b_max"]);
    grid.nx = meta["grid"]["nx"].get<int>();
    grid.ny = meta["grid"]["ny"].get<int>();
    grid.validate();

    EquilibriumSolution sol{grid,
                            read_field(dir / "p_star.csv", grid, FieldRole::power),
                            read_field(dir / "m_star.csv", grid, FieldRole::mean_field),
                            read_field(dir / "mu_star.csv", grid, FieldRole::multiplier),
                            0.0, 0.0, 0, {}, 0.0, 0.0, 0.0, 0.0};
    sol.i_mf = num(meta["i_mf"]);
    sol.mean_power = num(meta["mean_power"]);
    sol.iterations = meta["iterations"].get<int>();
    sol.r_tr = num(meta["r_tr"]);
    sol.p_max = num(meta["p_max"]);
    sol.gfactor = num(meta["gfactor"]);
    sol.sigma2 = num(meta["sigma2"]);
    for (const auto& e : meta["trace"])
    {
        sol.trace.push_back({num(e[0]), num(e[1]), num(e[2])});
    }
    if (key != nullptr)
    {
        *key = meta["config_key"].get<std::string>();
    }
    return sol;
}

} // namespace nbmf
