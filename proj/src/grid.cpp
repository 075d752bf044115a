#include "nbmf/grid.hpp"

#include <algorithm>
#include <cmath>

#include "nbmf/errors.hpp"

namespace nbmf {

void StateGrid::validate() const
{
    if (nx < 2 || ny < 2)
    {
        throw DomainError("grid: nx and ny must be >= 2");
    }
    if (!(e_max > 0.0) || !(b_max > 0.0))
    {
        throw DomainError("grid: e_max and b_max must be > 0");
    }
}

GridField::GridField(const StateGrid& grid, FieldRole role, double fill)
    : GridField(grid.nx, grid.ny, role, fill)
{
}

GridField::GridField(int nx, int ny, FieldRole role, double fill)
    : nx_(nx)
    , ny_(ny)
    , role_(role)
    , values_(static_cast<std::size_t>(nx + 1) * static_cast<std::size_t>(ny + 1), fill)
{
}

double integrate(const GridField& f, const StateGrid& grid)
{
    double sum = 0.0;
    for (int i = 0; i < grid.nx; ++i)
    {
        for (int j = 0; j < grid.ny; ++j)
        {
            sum += f(i, j);
        }
    }
    return sum * grid.de() * grid.db();
}

double integrate_product(const GridField& f, const GridField& g, const StateGrid& grid)
{
    double sum = 0.0;
    for (int i = 0; i < grid.nx; ++i)
    {
        for (int j = 0; j < grid.ny; ++j)
        {
            sum += f(i, j) * g(i, j);
        }
    }
    return sum * grid.de() * grid.db();
}

double sup_norm(const GridField& f)
{
    double best = 0.0;
    for (double v : f.values())
    {
        best = std::max(best, std::abs(v));
    }
    return best;
}

double relative_change(const GridField& next, const GridField& prev)
{
    if (next.nx() != prev.nx() || next.ny() != prev.ny())
    {
        throw DomainError("relative_change: field shapes differ");
    }
    auto a = next.values();
    auto b = prev.values();
    double diff = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
    {
        diff = std::max(diff, std::abs(a[k] - b[k]));
    }
    double scale = sup_norm(next);
    return scale > 0.0 ? diff / scale : diff;
}

} // namespace nbmf
