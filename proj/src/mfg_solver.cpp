#include "nbmf/mfg_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "nbmf/errors.hpp"

namespace nbmf {

void SolverSettings::validate() const
{
    if (!(tol > 0.0))
    {
        throw DomainError("solver.tol must be > 0");
    }
    if (max_iters < 1)
    {
        throw DomainError("solver.max_iters must be >= 1");
    }
    if (!(relaxation > 0.0) || relaxation > 1.0)
    {
        throw DomainError("solver.relaxation must be in (0, 1]");
    }
    if (!(p_max > 0.0))
    {
        throw DomainError("solver.p_max must be > 0");
    }
    if (!(source_scale > 0.0))
    {
        throw DomainError("solver.source_scale must be > 0");
    }
}

double IterationErrors::max() const
{
    return std::max({power, mean_field, multiplier});
}

ConvergenceError::ConvergenceError(std::vector<IterationErrors> trace)
    : std::runtime_error("equilibrium solver did not converge after "
                         + std::to_string(trace.size()) + " iterations (last error "
                         + (trace.empty() ? std::string("n/a")
                                          : std::to_string(trace.back().max()))
                         + ")")
    , trace_(std::move(trace))
{
}

bool ConvergenceError::diverged() const
{
    return !trace_.empty() && trace_.back().max() > trace_.front().max();
}

void EquilibriumProblem::validate() const
{
    grid.validate();
    settings.validate();
    link.validate();
    if (source.nx() != grid.nx || source.ny() != grid.ny)
    {
        throw DomainError("problem: source field does not match the grid");
    }
    if (!(r_tr > 0.0))
    {
        throw DomainError("problem: r_tr must be > 0");
    }
    if (gfactor < 0.0 || !(sigma2 > 0.0))
    {
        throw DomainError("problem: gfactor must be >= 0 and sigma2 > 0");
    }
}

GridField build_source(const StateGrid& grid, const TrafficSpec& spec)
{
    grid.validate();
    spec.validate();
    const auto& bits = spec.packet_kbits;
    const auto& energy = spec.energy_j;
    if (energy.lo < 0.0 || !(energy.hi < grid.e_max))
    {
        throw DomainError("source: energy budget support must lie in [0, e_max)");
    }
    if (bits.lo < 0.0 || !(1000.0 * bits.hi < grid.b_max))
    {
        throw DomainError("source: packet size support must lie in [0, b_max)");
    }
    TruncatedNormal f_e(energy);
    TruncatedNormal f_b(bits);
    GridField source(grid, FieldRole::source);
    for (int i = 0; i <= grid.nx; ++i)
    {
        double pe = f_e.pdf(grid.energy(i));
        if (pe == 0.0)
        {
            continue;
        }
        for (int j = 0; j <= grid.ny; ++j)
        {
            // density per kbit -> per bit
            source(i, j) = pe * f_b.pdf(grid.bits(j) / 1000.0) / 1000.0;
        }
    }
    return source;
}

GridField fpk_sweep(const GridField& p, const GridField& source, double r_tr,
                    const StateGrid& grid, const SolverSettings& settings)
{
    const double de = grid.de();
    const double db = grid.db();
    const double advect_b = r_tr / db;
    GridField m(grid, FieldRole::mean_field);
    for (int i = grid.nx - 1; i >= 0; --i)
    {
        for (int j = grid.ny - 1; j >= 0; --j)
        {
            double rhs = settings.source_scale * source(i, j) + p(i + 1, j) * m(i + 1, j) / de
                         + advect_b * m(i, j + 1);
            m(i, j) = rhs / (p(i, j) / de + advect_b);
        }
    }
    return m;
}

GridField normalize(const GridField& m, const StateGrid& grid)
{
    double mass = integrate(m, grid);
    if (!(mass > 0.0))
    {
        throw DegenerateMeanFieldError("degenerate mean-field: zero mass");
    }
    GridField out = m;
    for (double& v : out.values())
    {
        v /= mass;
    }
    return out;
}

double mean_field_interference(const GridField& p, const GridField& m, double gfactor,
                               double sigma2, const StateGrid& grid)
{
    return 2.0 * sigma2 * sigma2 * gfactor * integrate_product(p, m, grid);
}

GridField utility_field(const GridField& p, double i_mf, const LinkParams& link)
{
    GridField f(p.nx(), p.ny(), FieldRole::utility);
    for (int i = 0; i <= p.nx(); ++i)
    {
        for (int j = 0; j <= p.ny(); ++j)
        {
            f(i, j) = mf_utility(p(i, j), i_mf, link);
        }
    }
    return f;
}

GridField adjoint_sweep(const GridField& p, double i_mf, double r_tr, const StateGrid& grid,
                        const LinkParams& link)
{
    const double de = grid.de();
    const double advect_b = r_tr / grid.db();
    GridField mu(grid, FieldRole::multiplier);
    for (int i = 1; i <= grid.nx; ++i)
    {
        for (int j = 1; j <= grid.ny; ++j)
        {
            double f = mf_utility(p(i, j), i_mf, link);
            double rhs = -f + p(i, j) * mu(i - 1, j) / de + advect_b * mu(i, j - 1);
            mu(i, j) = rhs / (p(i, j) / de + advect_b);
        }
    }
    return mu;
}

GridField energy_gradient(const GridField& mu, const StateGrid& grid)
{
    const double de = grid.de();
    GridField g(grid, FieldRole::multiplier);
    for (int i = 1; i <= grid.nx; ++i)
    {
        for (int j = 0; j <= grid.ny; ++j)
        {
            g(i, j) = -(mu(i, j) - mu(i - 1, j)) / de;
        }
    }
    for (int j = 0; j <= grid.ny; ++j)
    {
        g(0, j) = g(1, j);
    }
    return g;
}

GridField power_update(const GridField& p, const GridField& mu, double i_mf,
                       const LinkParams& link, const SolverSettings& settings,
                       const StateGrid& grid)
{
    GridField g = energy_gradient(mu, grid);
    GridField next(grid, FieldRole::power);
    const double w = settings.relaxation;
    for (int i = 0; i <= grid.nx; ++i)
    {
        for (int j = 0; j <= grid.ny; ++j)
        {
            double target = std::clamp(stationary_power(g(i, j), i_mf, link), 0.0, settings.p_max);
            next(i, j) = w == 1.0 ? target : (1.0 - w) * p(i, j) + w * target;
        }
    }
    return next;
}

IterateState iterate_once(const EquilibriumProblem& problem, const GridField& p)
{
    const auto& grid = problem.grid;
    IterateState out;
    GridField raw = fpk_sweep(p, problem.source, problem.r_tr, grid, problem.settings);
    out.m = normalize(raw, grid);
    out.i_mf = mean_field_interference(p, out.m, problem.gfactor, problem.sigma2, grid);
    out.mu = adjoint_sweep(p, out.i_mf, problem.r_tr, grid, problem.link);
    out.p = power_update(p, out.mu, out.i_mf, problem.link, problem.settings, grid);
    return out;
}

EquilibriumSolution solve_equilibrium(const EquilibriumProblem& problem)
{
    problem.validate();
    const auto& grid = problem.grid;
    const auto& settings = problem.settings;

    GridField p(grid, FieldRole::power, settings.p_max);
    GridField m(grid, FieldRole::mean_field);
    GridField mu(grid, FieldRole::multiplier);
    std::vector<IterationErrors> trace;

    for (int iter = 1; iter <= settings.max_iters; ++iter)
    {
        IterateState next = iterate_once(problem, p);
        IterationErrors err{relative_change(next.p, p), relative_change(next.m, m),
                            relative_change(next.mu, mu)};
        trace.push_back(err);
        p = std::move(next.p);
        m = std::move(next.m);
        mu = std::move(next.mu);
        if (err.max() < settings.tol)
        {
            EquilibriumSolution sol;
            sol.grid = grid;
            sol.p_star = std::move(p);
            sol.m_star = std::move(m);
            sol.mu_star = std::move(mu);
            sol.i_mf = next.i_mf;
            sol.mean_power = integrate_product(sol.p_star, sol.m_star, grid);
            sol.iterations = iter;
            sol.trace = std::move(trace);
            sol.r_tr = problem.r_tr;
            sol.p_max = settings.p_max;
            sol.gfactor = problem.gfactor;
            sol.sigma2 = problem.sigma2;
            return sol;
        }
    }
    throw ConvergenceError(std::move(trace));
}

EquilibriumProblem make_problem(const StateGrid& grid, const SolverSettings& settings,
                                const NetworkGeometry& geom, const TrafficSpec& spec,
                                const TransportConfig& cfg, const LinkParams& link)
{
    geom.validate();
    EquilibriumProblem problem;
    problem.grid = grid;
    problem.settings = settings;
    problem.settings.source_scale = network_arrival_rate(spec, geom) / spec.tone_count;
    problem.link = link;
    problem.source = build_source(grid, spec);
    problem.r_tr = mean_field_rate(cfg);
    problem.gfactor = geometric_factor(geom, activity_probability(spec, cfg));
    problem.sigma2 = geom.sigma2;
    return problem;
}

EquilibriumSolution solve_equilibrium(const StateGrid& grid, const SolverSettings& settings,
                                      const NetworkGeometry& geom, const TrafficSpec& spec,
                                      const TransportConfig& cfg, const LinkParams& link)
{
    return solve_equilibrium(make_problem(grid, settings, geom, spec, cfg, link));
}

} // namespace nbmf
