#pragma once

#include <random>

#include "nbmf/phy_rate.hpp"
#include "nbmf/spatial_model.hpp"

namespace nbmf {

struct TruncatedNormalSpec
{
    double mu = 0.0;
    double sigma = 1.0;
    double lo = -1.0;
    double hi = 1.0;

    void validate() const;
};

/// Normal(mu, sigma^2) restricted to [lo, hi].
class TruncatedNormal
{
  public:
    explicit TruncatedNormal(const TruncatedNormalSpec& spec);

    const TruncatedNormalSpec& spec() const { return spec_; }
    double pdf(double x) const;
    double cdf(double x) const;
    /// Inverse CDF, u in [0, 1].
    double quantile(double u) const;
    double mean() const;
    double variance() const;

    template <class Rng>
    double operator()(Rng& rng) const
    {
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        return quantile(uni(rng));
    }

  private:
    double std_cdf(double z) const;

    TruncatedNormalSpec spec_;
    double cdf_lo_;
    double mass_;
};

struct TrafficSpec
{
    double lambda_u = 1.0 / 900.0;  ///< packets/s per device
    double beta_u = 500.0;          ///< mean devices per cell
    int tone_count = 12;
    /// Packet size in kbit.
    TruncatedNormalSpec packet_kbits{1.0, 0.3, 0.6, 1.9};
    /// Energy budget per packet in J.
    TruncatedNormalSpec energy_j{0.002, 0.001, 0.001, 0.003};

    void validate() const;
};

/// Number of tones available on 180 kHz for a tone bandwidth.
int tones_per_carrier(ToneBandwidth bw);

/// Aggregate Poisson arrival rate at one SBS: beta_u * lambda_u.
double cell_arrival_rate(const TrafficSpec& spec);

/// Expected arrival rate over the whole network disc.
double network_arrival_rate(const TrafficSpec& spec, const NetworkGeometry& geom);

/// E[T_tr] over the packet-size distribution, summed exactly over the
/// ceil(B/TBS) plateaus.
double expected_transmission_time(const TrafficSpec& spec, const TransportConfig& cfg);

struct QueueLoad
{
    double rho;
    /// Above this load the steady-state approximation is fragile.
    static constexpr double kWarnThreshold = 0.95;
    bool near_saturation() const { return rho >= kWarnThreshold; }
};

/// Per-tone M/G/1 load (lambda_s / c) * E[T_tr]. Never throws on rho >= 1.
QueueLoad queue_load(const TrafficSpec& spec, const TransportConfig& cfg);

/// Probability that an SBS has an active device on a given tone. Throws
/// UnstableQueueError when the load reaches 1.
double activity_probability(const TrafficSpec& spec, const TransportConfig& cfg);

} // namespace nbmf
