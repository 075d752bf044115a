#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace nbmf {

/// Distance band (lower bound exclusive, upper bound inclusive) with its
/// path-loss exponent.
struct PathLossBand
{
    double upper_m;
    double exponent;
};

/// Piecewise power-law path loss L(r) = l0 * r^-alpha(r). No continuity
/// correction is applied at the breakpoints.
struct PathLossModel
{
    /// Linear gain at 1 m; -31.5 dB is roughly a 900 MHz free-space
    /// figure.
    double l0 = std::pow(10.0, -3.15);
    std::vector<PathLossBand> bands{{3.0, 2.0},
                                    {20.0, 3.0},
                                    {40.0, 4.0},
                                    {std::numeric_limits<double>::infinity(), 6.0}};

    void validate() const;
    /// Exponent of the band containing r (bands are (lo, hi]).
    double exponent_at(double r) const;
};

struct NetworkGeometry
{
    double beta_s = 3e-2;   ///< SBS per m^2
    double beta_u = 500.0;  ///< mean devices per cell
    double r_s = 20.0;      ///< cell radius, m
    double r_net = 1e4;     ///< network radius, m
    double r_safe = 4.0;    ///< safety radius, m
    double beta_a = 2.0;
    double beta_b = 4.0;
    PathLossModel path_loss;
    double eta = 1.0;       ///< Rician LOS amplitude
    double sigma1 = 1.0;    ///< indoor scatter scale
    double sigma2 = 1.0;    ///< outdoor Rayleigh scale

    void validate() const;
};

/// Linear path gain at distance r (r > 0).
double path_loss(double r, const PathLossModel& model);

/// Serving-link distance density f_r on (0, r_s]: r/r_s ~ Beta(a, b).
double beta_radial_pdf(double r, const NetworkGeometry& geom);
double beta_radial_cdf(double r, const NetworkGeometry& geom);
/// Inverse of beta_radial_cdf; u in [0, 1].
double beta_radial_quantile(double u, const NetworkGeometry& geom);

template <class Rng>
double sample_link_distance(Rng& rng, const NetworkGeometry& geom)
{
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    return beta_radial_quantile(uni(rng), geom);
}

/// Mean serving-link distance a/(a+b) * r_s.
double mean_link_distance(const NetworkGeometry& geom);

/// Radius of the interferer-free disc: max(r_safe, 1/(2 sqrt(beta_s)) - r_s).
double min_interferer_distance(const NetworkGeometry& geom);

/// Intensity of active same-tone devices for a spatially constant
/// activity probability.
double active_intensity(double p_a, const NetworkGeometry& geom);

/// Closed-form integral of r^(1 - alpha(r)) over [r_min, r_max].
double radial_interference_integral(double r_min, double r_max, const PathLossModel& model);

/// 2 pi beta_s p_a * integral of r^(1-alpha(r)) over the interferer
/// annulus [R_min, r_net]. Throws DomainError when the annulus is empty.
double geometric_factor(const NetworkGeometry& geom, double p_a);

/// E[H^2] for the serving (Rician) link: 2 sigma1^2 + eta^2.
double indoor_fading_second_moment(const NetworkGeometry& geom);
/// E[H^2] for interfering (Rayleigh) links: 2 sigma2^2.
double outdoor_fading_second_moment(const NetworkGeometry& geom);

/// H^2 for a Rice(eta, sigma1) amplitude: noncentral chi-square, 2 dof.
template <class Rng>
double sample_indoor_fading_power(Rng& rng, const NetworkGeometry& geom)
{
    std::normal_distribution<double> gauss(0.0, geom.sigma1);
    double in_phase = geom.eta + gauss(rng);
    double quadrature = gauss(rng);
    return in_phase * in_phase + quadrature * quadrature;
}

/// H^2 for a Rayleigh(sigma2) amplitude: exponential with mean 2 sigma2^2.
template <class Rng>
double sample_outdoor_fading_power(Rng& rng, const NetworkGeometry& geom)
{
    std::exponential_distribution<double> expo(1.0 / outdoor_fading_second_moment(geom));
    return expo(rng);
}

} // namespace nbmf
