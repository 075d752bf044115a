#pragma once

#include "nbmf/spatial_model.hpp"

namespace nbmf {

/// Thermal noise density of -174 dBm/Hz in W/Hz.
double thermal_noise_density_w_per_hz(double dbm_per_hz = -174.0);

struct LinkParams
{
    double n0 = 0.0;      ///< noise density, W/Hz
    double b_w = 0.0;     ///< tone bandwidth, Hz
    double k_gain = 0.0;  ///< (2 + eta^2) L0 d^-alpha(d) at the mean link distance

    void validate() const;
    double noise_power() const { return n0 * b_w; }
};

/// Link parameters of the representative device, at the mean serving
/// distance of the Beta cluster law.
LinkParams make_link_params(const NetworkGeometry& geom, double n0_w_per_hz, double b_w_hz);

/// Mean-field SINR p K / (N0 Bw + I_mf).
double mf_sinr(double p, double i_mf, const LinkParams& link);

/// log2(1 + mf_sinr).
double mf_utility(double p, double i_mf, const LinkParams& link);

/// d mf_utility / dp = K / (ln2 (N + p K)), N = N0 Bw + I_mf.
double mf_utility_slope(double p, double i_mf, const LinkParams& link);

/// Unconstrained maximizer of F(p) - g p: 1/(ln2 g) - N/K for g > 0,
/// +infinity otherwise.
double stationary_power(double g, double i_mf, const LinkParams& link);

double to_db(double linear);

} // namespace nbmf
