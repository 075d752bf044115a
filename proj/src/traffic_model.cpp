#include "nbmf/traffic_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "nbmf/errors.hpp"

namespace nbmf {

void TruncatedNormalSpec::validate() const
{
    if (!(sigma > 0.0))
    {
        throw DomainError("truncated normal: sigma must be > 0");
    }
    if (!(lo < hi))
    {
        throw DomainError("truncated normal: lo must be < hi");
    }
}

TruncatedNormal::TruncatedNormal(const TruncatedNormalSpec& spec) : spec_(spec)
{
    spec_.validate();
    cdf_lo_ = std_cdf((spec_.lo - spec_.mu) / spec_.sigma);
    mass_ = std_cdf((spec_.hi - spec_.mu) / spec_.sigma) - cdf_lo_;
    if (!(mass_ > 0.0))
    {
        throw DomainError("truncated normal: no probability mass on [lo, hi]");
    }
}

double TruncatedNormal::std_cdf(double z) const
{
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double TruncatedNormal::pdf(double x) const
{
    if (x < spec_.lo || x > spec_.hi)
    {
        return 0.0;
    }
    double z = (x - spec_.mu) / spec_.sigma;
    return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * spec_.sigma * mass_);
}

double TruncatedNormal::cdf(double x) const
{
    if (x <= spec_.lo)
    {
        return 0.0;
    }
    if (x >= spec_.hi)
    {
        return 1.0;
    }
    return (std_cdf((x - spec_.mu) / spec_.sigma) - cdf_lo_) / mass_;
}

double TruncatedNormal::quantile(double u) const
{
    if (u < 0.0 || u > 1.0)
    {
        throw DomainError("truncated normal quantile: probability outside [0, 1]");
    }
    double p = cdf_lo_ + u * mass_;
    p = std::clamp(p, std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0));
    boost::math::normal_distribution<double> normal(spec_.mu, spec_.sigma);
    return std::clamp(boost::math::quantile(normal, p), spec_.lo, spec_.hi);
}

double TruncatedNormal::mean() const
{
    double phi_lo = std::exp(-0.5 * std::pow((spec_.lo - spec_.mu) / spec_.sigma, 2));
    double phi_hi = std::exp(-0.5 * std::pow((spec_.hi - spec_.mu) / spec_.sigma, 2));
    double norm = std::sqrt(2.0 * std::numbers::pi) * mass_;
    return spec_.mu + spec_.sigma * (phi_lo - phi_hi) / norm;
}

double TruncatedNormal::variance() const
{
    double alpha = (spec_.lo - spec_.mu) / spec_.sigma;
    double beta = (spec_.hi - spec_.mu) / spec_.sigma;
    double norm = std::sqrt(2.0 * std::numbers::pi) * mass_;
    double phi_a = std::exp(-0.5 * alpha * alpha) / norm;
    double phi_b = std::exp(-0.5 * beta * beta) / norm;
    double shift = phi_a - phi_b;
    return spec_.sigma * spec_.sigma * (1.0 + alpha * phi_a - beta * phi_b - shift * shift);
}

void TrafficSpec::validate() const
{
    if (!(lambda_u > 0.0))
    {
        throw DomainError("lambda_u must be > 0");
    }
    if (!(beta_u > 0.0))
    {
        throw DomainError("beta_u must be > 0");
    }
    if (tone_count < 1)
    {
        throw DomainError("tone_count must be >= 1");
    }
    packet_kbits.validate();
    energy_j.validate();
}

int tones_per_carrier(ToneBandwidth bw)
{
    return static_cast<int>(std::lround(180e3 / tone_bandwidth_hz(bw)));
}

double cell_arrival_rate(const TrafficSpec& spec)
{
    spec.validate();
    return spec.beta_u * spec.lambda_u;
}

double network_arrival_rate(const TrafficSpec& spec, const NetworkGeometry& geom)
{
    return cell_arrival_rate(spec) * geom.beta_s * std::numbers::pi * geom.r_net * geom.r_net;
}

double expected_transmission_time(const TrafficSpec& spec, const TransportConfig& cfg)
{
    spec.validate();
    cfg.validate();
    TruncatedNormal packet(spec.packet_kbits);
    double lo_bits = 1000.0 * spec.packet_kbits.lo;
    double hi_bits = 1000.0 * spec.packet_kbits.hi;
    if (!(lo_bits >= 0.0))
    {
        throw DomainError("packet size distribution must be supported on bits >= 0");
    }
    double tbs = cfg.tbs();
    std::int64_t first = lo_bits > 0.0 ? block_count(lo_bits, cfg.tbs()) : 1;
    std::int64_t last = block_count(hi_bits, cfg.tbs());

    double expected_blocks = 0.0;
    for (std::int64_t k = first; k <= last; ++k)
    {
        double lo = std::max(static_cast<double>(k - 1) * tbs, lo_bits);
        double hi = std::min(static_cast<double>(k) * tbs, hi_bits);
        double prob = packet.cdf(hi / 1000.0) - packet.cdf(lo / 1000.0);
        expected_blocks += static_cast<double>(k) * prob;
    }
    return expected_blocks * static_cast<double>(cfg.block_duration_us()) * 1e-6;
}

QueueLoad queue_load(const TrafficSpec& spec, const TransportConfig& cfg)
{
    double per_tone = cell_arrival_rate(spec) / spec.tone_count;
    return QueueLoad{per_tone * expected_transmission_time(spec, cfg)};
}

double activity_probability(const TrafficSpec& spec, const TransportConfig& cfg)
{
    QueueLoad load = queue_load(spec, cfg);
    if (load.rho >= 1.0)
    {
        throw UnstableQueueError(load.rho);
    }
    return load.rho;
}

} // namespace nbmf
