#include "nbmf/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "nbmf/errors.hpp"
#include "nbmf/link_budget.hpp"

namespace nbmf {

namespace {

namespace pt = boost::property_tree;

constexpr double kM2PerKm2 = 1e6;

struct Key
{
    std::string section;
    std::string name;

    std::string label() const { return section.empty() ? name : section + "." + name; }
};

[[noreturn]] void fail(const Key& key, const std::string& what)
{
    throw ConfigError(fmt::format("{}: {}", key.label(), what));
}

double parse_number(const Key& key, std::string text)
{
    boost::algorithm::trim(text);
    auto slash = text.find('/');
    if (slash != std::string::npos)
    {
        double num = parse_number(key, text.substr(0, slash));
        double den = parse_number(key, text.substr(slash + 1));
        if (den == 0.0)
        {
            fail(key, "zero denominator");
        }
        return num / den;
    }
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty())
    {
        fail(key, fmt::format("'{}' is not a number", text));
    }
    return value;
}

std::int64_t parse_integer(const Key& key, const std::string& text)
{
    std::string t = boost::algorithm::trim_copy(text);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    {
        fail(key, fmt::format("'{}' is not an integer", t));
    }
    return value;
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> parts;
    boost::algorithm::split(parts, text, boost::is_any_of(","));
    for (auto& p : parts)
    {
        boost::algorithm::trim(p);
    }
    if (parts.size() == 1 && parts[0].empty())
    {
        parts.clear();
    }
    return parts;
}

/// Splits "value unit" into its parts; unit is empty if absent.
std::pair<std::string, std::string> split_unit(const std::string& text)
{
    std::string t = boost::algorithm::trim_copy(text);
    auto space = t.find_last_of(" \t");
    if (space == std::string::npos)
    {
        return {t, ""};
    }
    std::string unit = t.substr(space + 1);
    if (!unit.empty() && (std::isalpha(static_cast<unsigned char>(unit[0])) != 0))
    {
        return {boost::algorithm::trim_copy(t.substr(0, space)), unit};
    }
    return {t, ""};
}

/// Checks the unit suffix against the accepted ones and returns the
/// divisor that converts the value to SI.
double unit_factor(const Key& key, const std::string& unit,
                   const std::map<std::string, double>& accepted, bool required)
{
    if (unit.empty())
    {
        if (required)
        {
            std::vector<std::string> names;
            for (const auto& [name, f] : accepted)
            {
                names.push_back(name);
            }
            fail(key, fmt::format("unit suffix required ({})", fmt::join(names, " | ")));
        }
        return 1.0;
    }
    auto it = accepted.find(unit);
    if (it == accepted.end())
    {
        fail(key, fmt::format("unknown unit '{}'", unit));
    }
    return it->second;
}

const std::map<std::string, double> kDensityUnits{{"per_km2", kM2PerKm2}, {"per_m2", 1.0}};

double parse_density(const Key& key, const std::string& text)
{
    auto [num, unit] = split_unit(text);
    return parse_number(key, num) / unit_factor(key, unit, kDensityUnits, true);
}

std::vector<double> parse_density_list(const Key& key, const std::string& text)
{
    auto [nums, unit] = split_unit(text);
    double factor = unit_factor(key, unit, kDensityUnits, true);
    std::vector<double> out;
    for (const auto& item : split_list(nums))
    {
        out.push_back(parse_number(key, item) / factor);
    }
    return out;
}

double parse_with_unit(const Key& key, const std::string& text, const std::string& unit_name)
{
    auto [num, unit] = split_unit(text);
    unit_factor(key, unit, {{unit_name, 1.0}}, false);
    return parse_number(key, num);
}

std::vector<double> parse_list(const Key& key, const std::string& text)
{
    std::vector<double> out;
    for (const auto& item : split_list(text))
    {
        out.push_back(parse_number(key, item));
    }
    return out;
}

TruncatedNormalSpec parse_truncated_normal(const Key& key, const std::string& text)
{
    auto v = parse_list(key, text);
    if (v.size() != 4)
    {
        fail(key, "expected 'mu, sigma, lo, hi'");
    }
    return {v[0], v[1], v[2], v[3]};
}

std::vector<InitialState> parse_states(const Key& key, const std::string& text)
{
    std::vector<InitialState> out;
    for (const auto& item : split_list(text))
    {
        auto colon = item.find(':');
        if (colon == std::string::npos)
        {
            fail(key, "expected 'e0:b0' pairs");
        }
        out.push_back({parse_number(key, item.substr(0, colon)),
                       parse_number(key, item.substr(colon + 1))});
    }
    return out;
}

ToneBandwidth parse_bandwidth(const Key& key, const std::string& text)
{
    double khz = parse_with_unit(key, text, "khz");
    if (khz == 3.75)
    {
        return ToneBandwidth::khz3_75;
    }
    if (khz == 15.0)
    {
        return ToneBandwidth::khz15;
    }
    fail(key, "tone bandwidth must be 3.75 or 15 khz");
}

std::string num(double v)
{
    return fmt::format("{}", v);
}

std::string num_list(const std::vector<double>& v)
{
    return fmt::format("{}", fmt::join(v, ", "));
}

/// Densities are written per km^2 when that form reads back exactly.
std::string density(double v)
{
    double km2 = v * kM2PerKm2;
    if (km2 / kM2PerKm2 == v)
    {
        return fmt::format("{} per_km2", km2);
    }
    return fmt::format("{} per_m2", v);
}

std::string density_list(const std::vector<double>& v)
{
    bool exact = std::all_of(v.begin(), v.end(),
                             [](double x) { return (x * kM2PerKm2) / kM2PerKm2 == x; });
    std::vector<double> scaled;
    for (double x : v)
    {
        scaled.push_back(exact ? x * kM2PerKm2 : x);
    }
    return fmt::format("{} {}", fmt::join(scaled, ", "), exact ? "per_km2" : "per_m2");
}

std::string tn(const TruncatedNormalSpec& s)
{
    return fmt::format("{}, {}, {}, {}", s.mu, s.sigma, s.lo, s.hi);
}

template <class F>
void check(const std::string& section, F&& f)
{
    try
    {
        f();
    }
    catch (const DomainError& e)
    {
        throw ConfigError(fmt::format("[{}] {}", section, e.what()));
    }
}

using Handler = void (*)(ExperimentConfig&, const Key&, const std::string&);

struct Entry
{
    const char* section;
    const char* name;
    Handler parse;
};

// clang-format off
const Entry kEntries[] = {
    {"geometry", "beta_s", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.geom.beta_s = parse_density(k, v); }},
    {"geometry", "beta_u", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.geom.beta_u = parse_number(k, v); }},
    {"geometry", "r_s", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.geom.r_s = parse_with_unit(k, v, "m"); }},
    {"geometry", "r_net", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.geom.r_net = parse_with_unit(k, v, "m"); }},
    {"geometry", "r_safe", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.geom.r_safe = parse_with_unit(k, v, "m"); }},
    {"geometry", "beta_a", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.geom.beta_a = parse_number(k, v); }},
    {"geometry", "beta_b", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.geom.beta_b = parse_number(k, v); }},
    {"geometry", "l0", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.geom.path_loss.l0 = parse_number(k, v); }},
    {"geometry", "path_loss_breaks", [](ExperimentConfig& c, const Key& k, const std::string& v) {
        auto breaks = parse_list(k, v);
        auto& bands = c.geom.path_loss.bands;
        bands.resize(breaks.size() + 1, {0.0, bands.empty() ? 2.0 : bands.back().exponent});
        for (std::size_t n = 0; n < breaks.size(); ++n) { bands[n].upper_m = breaks[n]; }
        bands.back().upper_m = std::numeric_limits<double>::infinity();
    }},
    {"geometry", "path_loss_exponents", [](ExperimentConfig& c, const Key& k, const std::string& v) {
        auto exps = parse_list(k, v);
        auto& bands = c.geom.path_loss.bands;
        if (exps.size() != bands.size()) { fail(k, fmt::format("expected {} exponents (one per band)", bands.size())); }
        for (std::size_t n = 0; n < exps.size(); ++n) { bands[n].exponent = exps[n]; }
    }},
    {"geometry", "eta", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.geom.eta = parse_number(k, v); }},
    {"geometry", "sigma1", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.geom.sigma1 = parse_number(k, v); }},
    {"geometry", "sigma2", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.geom.sigma2 = parse_number(k, v); }},
    {"traffic", "lambda_u", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.traffic.lambda_u = parse_with_unit(k, v, "per_s"); }},
    {"traffic", "tone_count", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.traffic.tone_count = static_cast<int>(parse_integer(k, v)); }},
    {"traffic", "packet_kbits", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.traffic.packet_kbits = parse_truncated_normal(k, v); }},
    {"traffic", "energy_j", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.traffic.energy_j = parse_truncated_normal(k, v); }},
    {"transport", "tone_bandwidth", [](ExperimentConfig& c, const Key& k, const std::string& v) {
        c.transport.ru_format = RuFormat::make(parse_bandwidth(k, v), c.transport.ru_format.tones_per_ru());
    }},
    {"transport", "tones_per_ru", [](ExperimentConfig& c, const Key& k, const std::string& v) {
        int tones = static_cast<int>(parse_integer(k, v));
        try { c.transport.ru_format = RuFormat::make(c.transport.ru_format.tone_bandwidth(), tones); }
        catch (const DomainError& e) { fail(k, e.what()); }
    }},
    {"transport", "mcs", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.transport.mcs_level = static_cast<int>(parse_integer(k, v)); }},
    {"transport", "n_ru", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.transport.n_ru = static_cast<int>(parse_integer(k, v)); }},
    {"transport", "n_rep", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.transport.n_rep = static_cast<int>(parse_integer(k, v)); }},
    {"link", "n0", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.link.n0_dbm_per_hz = parse_with_unit(k, v, "dbm_per_hz"); }},
    {"link", "bandwidth", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.link.bandwidth_hz = parse_with_unit(k, v, "hz"); }},
    {"grid", "e_max", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.grid.e_max = parse_with_unit(k, v, "j"); }},
    {"grid", "b_max", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.grid.b_max = parse_with_unit(k, v, "bits"); }},
    {"grid", "nx", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.grid.nx = static_cast<int>(parse_integer(k, v)); }},
    {"grid", "ny", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.grid.ny = static_cast<int>(parse_integer(k, v)); }},
    {"solver", "tol", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.solver.tol = parse_number(k, v); }},
    {"solver", "max_iters", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.solver.max_iters = static_cast<int>(parse_integer(k, v)); }},
    {"solver", "relaxation", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.solver.relaxation = parse_number(k, v); }},
    {"solver", "p_max", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.solver.p_max = parse_with_unit(k, v, "w"); }},
    {"experiment", "seed", [](ExperimentConfig& c, const Key& k, const std::string& v) {
        auto s = parse_integer(k, v);
        if (s < 0) { fail(k, "seed must be >= 0"); }
        c.experiment.seed = static_cast<std::uint64_t>(s);
    }},
    {"experiment", "jobs", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.experiment.jobs = static_cast<int>(parse_integer(k, v)); }},
    {"experiment", "beta_s_sweep", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.experiment.beta_s_sweep = parse_density_list(k, v); }},
    {"experiment", "convergence_beta_s", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.experiment.convergence_beta_s = parse_density_list(k, v); }},
    {"experiment", "lambda_u_sweep", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.experiment.lambda_u_sweep = parse_list(k, v); }},
    {"experiment", "mcs_sweep", [](ExperimentConfig& c, const Key& k, const std::string& v) {
        c.experiment.mcs_sweep.clear();
        for (const auto& item : split_list(v)) { c.experiment.mcs_sweep.push_back(static_cast<int>(parse_integer(k, item))); }
    }},
    {"experiment", "r_safe_sweep", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.experiment.r_safe_sweep = parse_list(k, v); }},
    {"experiment", "distances", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.experiment.distances = parse_list(k, v); }},
    {"experiment", "sinr_states", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.experiment.sinr_states = parse_states(k, v); }},
    {"experiment", "success_beta_s", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.experiment.success_beta_s = parse_density(k, v); }},
    {"experiment", "success_lambda_u", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.experiment.success_lambda_u = parse_number(k, v); }},
    {"experiment", "success_energies", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.experiment.success_energies = parse_list(k, v); }},
    {"experiment", "success_packet_bits", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.experiment.success_packet_bits = parse_list(k, v); }},
    {"experiment", "success_distances", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.experiment.success_distances = parse_list(k, v); }},
    {"experiment", "fading_draws", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.experiment.fading_draws = parse_integer(k, v); }},
    {"experiment", "mc_trials", [](ExperimentConfig& c, const Key& k, const std::string& v) { c.experiment.mc_trials = parse_integer(k, v); }},
};
// clang-format on

bool same_geometry(const NetworkGeometry& a, const NetworkGeometry& b)
{
    auto band_eq = [](const PathLossBand& x, const PathLossBand& y) {
        return x.upper_m == y.upper_m && x.exponent == y.exponent;
    };
    return a.beta_s == b.beta_s && a.beta_u == b.beta_u && a.r_s == b.r_s && a.r_net == b.r_net
           && a.r_safe == b.r_safe && a.beta_a == b.beta_a && a.beta_b == b.beta_b
           && a.path_loss.l0 == b.path_loss.l0
           && std::equal(a.path_loss.bands.begin(), a.path_loss.bands.end(),
                         b.path_loss.bands.begin(), b.path_loss.bands.end(), band_eq)
           && a.eta == b.eta && a.sigma1 == b.sigma1 && a.sigma2 == b.sigma2;
}

bool same_tn(const TruncatedNormalSpec& a, const TruncatedNormalSpec& b)
{
    return a.mu == b.mu && a.sigma == b.sigma && a.lo == b.lo && a.hi == b.hi;
}

} // namespace

void ExperimentConfig::validate() const
{
    check("geometry", [&] {
        geom.validate();
        geom.path_loss.validate();
    });
    check("traffic", [&] { traffic.validate(); });
    if (traffic.beta_u != geom.beta_u)
    {
        throw ConfigError("traffic.beta_u: must equal geometry.beta_u");
    }
    if (traffic.tone_count != tones_per_carrier(transport.ru_format.tone_bandwidth()))
    {
        throw ConfigError(fmt::format("traffic.tone_count: must be {} for {} tones",
                                      tones_per_carrier(transport.ru_format.tone_bandwidth()),
                                      to_string(transport.ru_format.tone_bandwidth())));
    }
    check("transport", [&] { transport.validate(); });
    check("link", [&] { link_params().validate(); });
    check("grid", [&] { grid.validate(); });
    check("solver", [&] { solver.validate(); });
    if (traffic.energy_j.hi >= grid.e_max || traffic.packet_kbits.hi * 1000.0 >= grid.b_max)
    {
        throw ConfigError("grid: e_max and b_max must exceed the arrival support");
    }

    const auto& x = experiment;
    auto positive = [](const std::vector<double>& v) {
        return !v.empty() && std::all_of(v.begin(), v.end(), [](double d) { return d > 0.0; });
    };
    if (x.jobs < 1)
    {
        throw ConfigError("experiment.jobs: must be >= 1");
    }
    if (!positive(x.beta_s_sweep))
    {
        throw ConfigError("experiment.beta_s_sweep: needs positive densities");
    }
    if (x.convergence_beta_s.size() != 2 || !positive(x.convergence_beta_s))
    {
        throw ConfigError("experiment.convergence_beta_s: needs exactly two positive densities");
    }
    if (!positive(x.lambda_u_sweep))
    {
        throw ConfigError("experiment.lambda_u_sweep: needs positive rates");
    }
    if (x.mcs_sweep.empty()
        || std::any_of(x.mcs_sweep.begin(), x.mcs_sweep.end(),
                       [](int m) { return m < 0 || m > kMaxMcs; }))
    {
        throw ConfigError("experiment.mcs_sweep: levels must lie in [0, 13]");
    }
    if (!positive(x.r_safe_sweep)
        || std::any_of(x.r_safe_sweep.begin(), x.r_safe_sweep.end(),
                       [&](double r) { return r >= geom.r_s; }))
    {
        throw ConfigError("experiment.r_safe_sweep: values must lie in (0, r_s)");
    }
    auto in_cell = [&](const std::vector<double>& v) {
        return positive(v)
               && std::all_of(v.begin(), v.end(), [&](double r) { return r <= geom.r_s; });
    };
    if (!in_cell(x.distances))
    {
        throw ConfigError("experiment.distances: values must lie in (0, r_s]");
    }
    if (!in_cell(x.success_distances))
    {
        throw ConfigError("experiment.success_distances: values must lie in (0, r_s]");
    }
    for (const auto& s : x.sinr_states)
    {
        if (!(s.e0 > 0.0) || s.e0 > grid.e_max || !(s.b0 > 0.0) || s.b0 > grid.b_max)
        {
            throw ConfigError("experiment.sinr_states: states must lie inside the grid");
        }
    }
    if (!(x.success_beta_s > 0.0) || !(x.success_lambda_u > 0.0))
    {
        throw ConfigError("experiment.success_beta_s/success_lambda_u: must be > 0");
    }
    if (!positive(x.success_energies)
        || std::any_of(x.success_energies.begin(), x.success_energies.end(),
                       [&](double e) { return e > grid.e_max; }))
    {
        throw ConfigError("experiment.success_energies: values must lie in (0, e_max]");
    }
    if (!positive(x.success_packet_bits)
        || std::any_of(x.success_packet_bits.begin(), x.success_packet_bits.end(),
                       [&](double b) { return b > grid.b_max; }))
    {
        throw ConfigError("experiment.success_packet_bits: values must lie in (0, b_max]");
    }
    if (x.fading_draws < 100)
    {
        throw ConfigError("experiment.fading_draws: must be >= 100");
    }
    if (x.mc_trials < 1000)
    {
        throw ConfigError("experiment.mc_trials: must be >= 1000");
    }
}

LinkParams ExperimentConfig::link_params() const
{
    return make_link_params(geom, thermal_noise_density_w_per_hz(link.n0_dbm_per_hz),
                            link.bandwidth_hz);
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b)
{
    return same_geometry(a.geom, b.geom) && a.traffic.lambda_u == b.traffic.lambda_u
           && a.traffic.beta_u == b.traffic.beta_u && a.traffic.tone_count == b.traffic.tone_count
           && same_tn(a.traffic.packet_kbits, b.traffic.packet_kbits)
           && same_tn(a.traffic.energy_j, b.traffic.energy_j)
           && a.transport.ru_format == b.transport.ru_format
           && a.transport.mcs_level == b.transport.mcs_level && a.transport.n_ru == b.transport.n_ru
           && a.transport.n_rep == b.transport.n_rep && a.link == b.link && a.grid == b.grid
           && a.solver.tol == b.solver.tol && a.solver.max_iters == b.solver.max_iters
           && a.solver.relaxation == b.solver.relaxation && a.solver.p_max == b.solver.p_max
           && a.experiment == b.experiment;
}

ExperimentConfig parse_config(const std::string& text)
{
    pt::ptree tree;
    std::istringstream in(text);
    try
    {
        pt::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error& e)
    {
        throw ConfigError(fmt::format("config: {}", e.what()));
    }

    ExperimentConfig cfg;
    std::set<std::string> sections;
    for (const auto& e : kEntries)
    {
        sections.insert(e.section);
    }
    for (const auto& [section, body] : tree)
    {
        if (!sections.contains(section))
        {
            throw ConfigError(fmt::format("{}: unknown section", section));
        }
        if (body.empty() && !body.data().empty())
        {
            throw ConfigError(fmt::format("{}: key outside any section", section));
        }
    }
    // Apply in table order so dependent keys (breaks before exponents,
    // bandwidth before tones) see their prerequisites.
    for (const auto& e : kEntries)
    {
        auto section = tree.get_child_optional(e.section);
        if (!section)
        {
            continue;
        }
        if (auto value = section->get_optional<std::string>(e.name))
        {
            e.parse(cfg, Key{e.section, e.name}, *value);
        }
    }
    for (const auto& [section, body] : tree)
    {
        for (const auto& [name, value] : body)
        {
            bool known = std::any_of(std::begin(kEntries), std::end(kEntries), [&](const Entry& e) {
                return section == e.section && name == e.name;
            });
            if (!known)
            {
                throw ConfigError(fmt::format("{}.{}: unknown key", section, name));
            }
        }
    }
    cfg.traffic.beta_u = cfg.geom.beta_u;
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw ConfigError(fmt::format("{}: cannot open config", path.string()));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string format_config(const ExperimentConfig& c)
{
    std::vector<double> breaks;
    std::vector<double> exps;
    for (const auto& band : c.geom.path_loss.bands)
    {
        if (std::isfinite(band.upper_m))
        {
            breaks.push_back(band.upper_m);
        }
        exps.push_back(band.exponent);
    }
    std::vector<std::string> states;
    for (const auto& s : c.experiment.sinr_states)
    {
        states.push_back(fmt::format("{}:{}", s.e0, s.b0));
    }
    const auto& x = c.experiment;
    std::string out;
    auto line = [&](const std::string& key, const std::string& value) {
        out += fmt::format("{} = {}\n", key, value);
    };
    out += "[geometry]\n";
    line("beta_s", density(c.geom.beta_s));
    line("beta_u", num(c.geom.beta_u));
    line("r_s", num(c.geom.r_s) + " m");
    line("r_net", num(c.geom.r_net) + " m");
    line("r_safe", num(c.geom.r_safe) + " m");
    line("beta_a", num(c.geom.beta_a));
    line("beta_b", num(c.geom.beta_b));
    line("l0", num(c.geom.path_loss.l0));
    line("path_loss_breaks", num_list(breaks));
    line("path_loss_exponents", num_list(exps));
    line("eta", num(c.geom.eta));
    line("sigma1", num(c.geom.sigma1));
    line("sigma2", num(c.geom.sigma2));
    out += "\n[traffic]\n";
    line("lambda_u", num(c.traffic.lambda_u) + " per_s");
    line("tone_count", std::to_string(c.traffic.tone_count));
    line("packet_kbits", tn(c.traffic.packet_kbits));
    line("energy_j", tn(c.traffic.energy_j));
    out += "\n[transport]\n";
    line("tone_bandwidth",
         num(tone_bandwidth_hz(c.transport.ru_format.tone_bandwidth()) / 1000.0) + " khz");
    line("tones_per_ru", std::to_string(c.transport.ru_format.tones_per_ru()));
    line("mcs", std::to_string(c.transport.mcs_level));
    line("n_ru", std::to_string(c.transport.n_ru));
    line("n_rep", std::to_string(c.transport.n_rep));
    out += "\n[link]\n";
    line("n0", num(c.link.n0_dbm_per_hz) + " dbm_per_hz");
    line("bandwidth", num(c.link.bandwidth_hz) + " hz");
    out += "\n[grid]\n";
    line("e_max", num(c.grid.e_max) + " j");
    line("b_max", num(c.grid.b_max) + " bits");
    line("nx", std::to_string(c.grid.nx));
    line("ny", std::to_string(c.grid.ny));
    out += "\n[solver]\n";
    line("tol", num(c.solver.tol));
    line("max_iters", std::to_string(c.solver.max_iters));
    line("relaxation", num(c.solver.relaxation));
    line("p_max", num(c.solver.p_max) + " w");
    out += "\n[experiment]\n";
    line("seed", std::to_string(x.seed));
    line("jobs", std::to_string(x.jobs));
    line("beta_s_sweep", density_list(x.beta_s_sweep));
    line("convergence_beta_s", density_list(x.convergence_beta_s));
    line("lambda_u_sweep", num_list(x.lambda_u_sweep));
    line("mcs_sweep", fmt::format("{}", fmt::join(x.mcs_sweep, ", ")));
    line("r_safe_sweep", num_list(x.r_safe_sweep));
    line("distances", num_list(x.distances));
    line("sinr_states", fmt::format("{}", fmt::join(states, ", ")));
    line("success_beta_s", density(x.success_beta_s));
    line("success_lambda_u", num(x.success_lambda_u));
    line("success_energies", num_list(x.success_energies));
    line("success_packet_bits", num_list(x.success_packet_bits));
    line("success_distances", num_list(x.success_distances));
    line("fading_draws", std::to_string(x.fading_draws));
    line("mc_trials", std::to_string(x.mc_trials));
    return out;
}

double parse_number(const std::string& label, const std::string& text)
{
    return parse_number(Key{"", label}, text);
}

} // namespace nbmf
