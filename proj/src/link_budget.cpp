#include "nbmf/link_budget.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "nbmf/errors.hpp"

namespace nbmf {

double thermal_noise_density_w_per_hz(double dbm_per_hz)
{
    return std::pow(10.0, dbm_per_hz / 10.0) * 1e-3;
}

void LinkParams::validate() const
{
    if (!(n0 > 0.0) || !(b_w > 0.0) || !(k_gain > 0.0))
    {
        throw DomainError("link: n0, b_w and k_gain must be > 0");
    }
}

LinkParams make_link_params(const NetworkGeometry& geom, double n0_w_per_hz, double b_w_hz)
{
    LinkParams link;
    link.n0 = n0_w_per_hz;
    link.b_w = b_w_hz;
    link.k_gain = indoor_fading_second_moment(geom)
                  * path_loss(mean_link_distance(geom), geom.path_loss);
    link.validate();
    return link;
}

double mf_sinr(double p, double i_mf, const LinkParams& link)
{
    if (p < 0.0)
    {
        throw DomainError("mf_sinr: power must be >= 0");
    }
    return p * link.k_gain / (link.noise_power() + i_mf);
}

double mf_utility(double p, double i_mf, const LinkParams& link)
{
    return std::log2(1.0 + mf_sinr(p, i_mf, link));
}

double mf_utility_slope(double p, double i_mf, const LinkParams& link)
{
    double noise = link.noise_power() + i_mf;
    return link.k_gain / (std::numbers::ln2 * (noise + p * link.k_gain));
}

double stationary_power(double g, double i_mf, const LinkParams& link)
{
    if (!(g > 0.0))
    {
        return std::numeric_limits<double>::infinity();
    }
    double noise = link.noise_power() + i_mf;
    return 1.0 / (std::numbers::ln2 * g) - noise / link.k_gain;
}

double to_db(double linear)
{
    return 10.0 * std::log10(linear);
}

} // namespace nbmf
