#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nbmf/mfg_solver.hpp"

namespace nbmf {

/// Comma-separated table with a header row. Doubles are formatted with 17
/// significant digits so a read-back reproduces them exactly.
struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    std::string str() const;
};

std::string cell(double v);
std::string cell(std::int64_t v);
std::string cell(int v);

/// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

CsvTable read_csv(const std::filesystem::path& path);

/// "i,j,e_joules,b_bits,value" listing of one field.
CsvTable field_table(const GridField& f, const StateGrid& grid);

/// Directory with p_star.csv, m_star.csv, mu_star.csv and solution.json.
/// `key` identifies the model configuration that produced the solution.
void write_solution(const std::filesystem::path& dir, const EquilibriumSolution& sol,
                    const std::string& key);
EquilibriumSolution read_solution(const std::filesystem::path& dir, std::string* key = nullptr);

nlohmann::json trace_json(const std::vector<IterationErrors>& trace);

} // namespace nbmf
