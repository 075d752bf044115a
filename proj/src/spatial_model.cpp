#include "nbmf/spatial_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "nbmf/errors.hpp"

namespace nbmf {

void PathLossModel::validate() const
{
    if (!(l0 > 0.0))
    {
        throw DomainError("path_loss.l0 must be > 0");
    }
    if (bands.empty())
    {
        throw DomainError("path_loss: at least one band required");
    }
    double prev_upper = 0.0;
    double prev_exp = 0.0;
    for (const auto& band : bands)
    {
        if (!(band.upper_m > prev_upper))
        {
            throw DomainError("path_loss: band upper radii must be strictly increasing");
        }
        if (band.exponent < 2.0 || band.exponent > 12.0)
        {
            throw DomainError("path_loss: exponent " + std::to_string(band.exponent)
                              + " outside [2, 12]");
        }
        if (band.exponent < prev_exp)
        {
            throw DomainError("path_loss: exponents must be nondecreasing with distance");
        }
        prev_upper = band.upper_m;
        prev_exp = band.exponent;
    }
    if (!std::isinf(bands.back().upper_m))
    {
        throw DomainError("path_loss: last band must extend to infinity");
    }
}

double PathLossModel::exponent_at(double r) const
{
    for (const auto& band : bands)
    {
        if (r <= band.upper_m)
        {
            return band.exponent;
        }
    }
    return bands.back().exponent;
}

void NetworkGeometry::validate() const
{
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0))
        {
            throw DomainError(std::string(name) + " must be > 0");
        }
    };
    positive(beta_s, "beta_s");
    positive(beta_u, "beta_u");
    positive(r_s, "r_s");
    positive(r_net, "r_net");
    positive(r_safe, "r_safe");
    positive(beta_a, "beta_a");
    positive(beta_b, "beta_b");
    positive(sigma1, "sigma1");
    positive(sigma2, "sigma2");
    if (eta < 0.0)
    {
        throw DomainError("eta must be >= 0");
    }
    if (r_net < 10.0 * r_s)
    {
        throw DomainError("r_net must be >= 10 * r_s");
    }
    if (!(r_safe < r_s))
    {
        throw DomainError("r_safe must be < r_s");
    }
    path_loss.validate();
}

double path_loss(double r, const PathLossModel& model)
{
    if (!(r > 0.0))
    {
        throw DomainError("path_loss: distance must be > 0");
    }
    return model.l0 * std::pow(r, -model.exponent_at(r));
}

namespace {

void require_in_cell(double r, const NetworkGeometry& geom)
{
    if (!(r > 0.0) || r > geom.r_s)
    {
        throw DomainError("distance " + std::to_string(r) + " outside (0, r_s]");
    }
}

} // namespace

double beta_radial_pdf(double r, const NetworkGeometry& geom)
{
    require_in_cell(r, geom);
    double u = r / geom.r_s;
    double a = geom.beta_a;
    double b = geom.beta_b;
    if (u == 1.0)
    {
        if (b < 1.0)
        {
            return std::numeric_limits<double>::infinity();
        }
        if (b > 1.0)
        {
            return 0.0;
        }
    }
    return std::pow(u, a - 1.0) * std::pow(1.0 - u, b - 1.0)
           / (std::beta(a, b) * geom.r_s);
}

double beta_radial_cdf(double r, const NetworkGeometry& geom)
{
    if (r <= 0.0)
    {
        return 0.0;
    }
    if (r >= geom.r_s)
    {
        return 1.0;
    }
    return boost::math::ibeta(geom.beta_a, geom.beta_b, r / geom.r_s);
}

double beta_radial_quantile(double u, const NetworkGeometry& geom)
{
    if (u < 0.0 || u > 1.0)
    {
        throw DomainError("beta_radial_quantile: probability outside [0, 1]");
    }
    return geom.r_s * boost::math::ibeta_inv(geom.beta_a, geom.beta_b, u);
}

double mean_link_distance(const NetworkGeometry& geom)
{
    return geom.beta_a / (geom.beta_a + geom.beta_b) * geom.r_s;
}

double min_interferer_distance(const NetworkGeometry& geom)
{
    if (!(geom.beta_s > 0.0))
    {
        throw DomainError("beta_s must be > 0");
    }
    return std::max(geom.r_safe, 1.0 / (2.0 * std::sqrt(geom.beta_s)) - geom.r_s);
}

double active_intensity(double p_a, const NetworkGeometry& geom)
{
    if (p_a < 0.0 || p_a > 1.0)
    {
        throw DomainError("activity probability outside [0, 1]");
    }
    return geom.beta_s * p_a;
}

double radial_interference_integral(double r_min, double r_max, const PathLossModel& model)
{
    if (!(r_min > 0.0))
    {
        throw DomainError("radial integral: r_min must be > 0");
    }
    double total = 0.0;
    double lower = 0.0;
    for (const auto& band : model.bands)
    {
        double lo = std::max(lower, r_min);
        double hi = std::min(band.upper_m, r_max);
        lower = band.upper_m;
        if (hi <= lo)
        {
            continue;
        }
        if (band.exponent == 2.0)
        {
            total += std::log(hi / lo);
        }
        else
        {
            double k = 2.0 - band.exponent;
            total += (std::pow(hi, k) - std::pow(lo, k)) / k;
        }
    }
    return total;
}

double geometric_factor(const NetworkGeometry& geom, double p_a)
{
    double r_min = min_interferer_distance(geom);
    if (r_min >= geom.r_net)
    {
        throw DomainError("no interferer annulus: R_min >= r_net");
    }
    return 2.0 * std::numbers::pi * active_intensity(p_a, geom)
           * radial_interference_integral(r_min, geom.r_net, geom.path_loss);
}

double indoor_fading_second_moment(const NetworkGeometry& geom)
{
    return 2.0 * geom.sigma1 * geom.sigma1 + geom.eta * geom.eta;
}

double outdoor_fading_second_moment(const NetworkGeometry& geom)
{
    return 2.0 * geom.sigma2 * geom.sigma2;
}

} // namespace nbmf
