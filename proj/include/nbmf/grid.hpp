#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nbmf {

/// Uniform discretization of [0, e_max] x [0, b_max] with nodes
/// (i * de, j * db), 0 <= i <= nx, 0 <= j <= ny.
struct StateGrid
{
    double e_max = 0.004;  ///< J
    double b_max = 2000.0; ///< bits
    int nx = 50;
    int ny = 200;

    void validate() const;
    double de() const { return e_max / nx; }
    double db() const { return b_max / ny; }
    double energy(int i) const { return i * de(); }
    double bits(int j) const { return j * db(); }
    std::size_t node_count() const
    {
        return static_cast<std::size_t>(nx + 1) * static_cast<std::size_t>(ny + 1);
    }
    friend bool operator==(const StateGrid&, const StateGrid&) = default;
};

enum class FieldRole
{
    power,
    mean_field,
    multiplier,
    source,
    utility,
};

/// Node values of one quantity on a StateGrid, stored energy-major.
class GridField
{
  public:
    GridField() = default;
    GridField(const StateGrid& grid, FieldRole role, double fill = 0.0);
    GridField(int nx, int ny, FieldRole role, double fill = 0.0);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    FieldRole role() const { return role_; }

    double& operator()(int i, int j) { return values_[index(i, j)]; }
    double operator()(int i, int j) const { return values_[index(i, j)]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    friend bool operator==(const GridField&, const GridField&) = default;

  private:
    std::size_t index(int i, int j) const
    {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(ny_ + 1)
               + static_cast<std::size_t>(j);
    }

    int nx_ = 0;
    int ny_ = 0;
    FieldRole role_ = FieldRole::power;
    std::vector<double> values_;
};

/// Rectangle rule with lower-left node weights: sum over i < nx, j < ny of
/// f(i, j) * de * db.
double integrate(const GridField& f, const StateGrid& grid);

/// Rectangle-rule integral of the pointwise product f * g.
double integrate_product(const GridField& f, const GridField& g, const StateGrid& grid);

double sup_norm(const GridField& f);

/// sup|next - prev| / sup|next| (absolute change when next is zero).
double relative_change(const GridField& next, const GridField& prev);

} // namespace nbmf
