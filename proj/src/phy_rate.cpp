#include "nbmf/phy_rate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nbmf/errors.hpp"

namespace nbmf {

UnstableQueueError::UnstableQueueError(double rho)
    : std::runtime_error("unstable queue: per-tone load rho = " + std::to_string(rho)
                         + " (must be < 1)")
    , rho_(rho)
{
}

namespace {

// Rows: MCS 0..13, columns: n_ru in kRuCounts order. MCS 0 / n_ru 3 is 58
// as listed, although the neighbouring entries suggest 56.
constexpr int kTbsTable[14][8] = {
    {16, 32, 58, 88, 120, 152, 208, 256},
    {24, 56, 88, 144, 176, 208, 256, 344},
    {32, 72, 144, 176, 208, 256, 328, 424},
    {40, 104, 176, 208, 256, 328, 440, 568},
    {56, 120, 208, 256, 328, 408, 552, 680},
    {72, 144, 224, 328, 424, 504, 680, 872},
    {88, 176, 256, 392, 504, 600, 808, 1000},
    {104, 224, 328, 472, 584, 712, 1000, 1224},
    {120, 256, 392, 536, 680, 808, 1096, 1384},
    {136, 296, 456, 616, 776, 936, 1256, 1544},
    {144, 328, 504, 680, 872, 1000, 1384, 1736},
    {176, 376, 584, 776, 1000, 1192, 1608, 2024},
    {208, 440, 680, 1000, 1128, 1352, 1800, 2280},
    {224, 488, 744, 1032, 1256, 1544, 2024, 2536},
};

int ru_column(int n_ru)
{
    auto it = std::find(kRuCounts.begin(), kRuCounts.end(), n_ru);
    if (it == kRuCounts.end())
    {
        throw DomainError("n_ru = " + std::to_string(n_ru)
                          + " is not one of {1,2,3,4,5,6,8,10}");
    }
    return static_cast<int>(it - kRuCounts.begin());
}

} // namespace

double tone_bandwidth_hz(ToneBandwidth bw)
{
    return bw == ToneBandwidth::khz3_75 ? 3750.0 : 15000.0;
}

std::string to_string(ToneBandwidth bw)
{
    return bw == ToneBandwidth::khz3_75 ? "3.75kHz" : "15kHz";
}

RuFormat RuFormat::make(ToneBandwidth bw, int tones_per_ru)
{
    if (bw == ToneBandwidth::khz3_75)
    {
        if (tones_per_ru != 1)
        {
            throw DomainError("tones_per_ru: 3.75 kHz spacing supports single tone only");
        }
        return RuFormat(bw, 1, 16, 2000);
    }
    switch (tones_per_ru)
    {
        case 1: return RuFormat(bw, 1, 16, 500);
        case 3: return RuFormat(bw, 3, 8, 500);
        case 6: return RuFormat(bw, 6, 4, 500);
        case 12: return RuFormat(bw, 12, 2, 500);
        default:
            throw DomainError("tones_per_ru = " + std::to_string(tones_per_ru)
                              + " is not one of {1,3,6,12}");
    }
}

const std::array<RuFormat, 5>& ru_formats()
{
    static const std::array<RuFormat, 5> formats{
        RuFormat::make(ToneBandwidth::khz3_75, 1),
        RuFormat::make(ToneBandwidth::khz15, 1),
        RuFormat::make(ToneBandwidth::khz15, 3),
        RuFormat::make(ToneBandwidth::khz15, 6),
        RuFormat::make(ToneBandwidth::khz15, 12),
    };
    return formats;
}

int tbs_lookup(int mcs, int n_ru)
{
    if (mcs < 0 || mcs > kMaxMcs)
    {
        throw DomainError("mcs_level = " + std::to_string(mcs) + " outside [0, 13]");
    }
    return kTbsTable[mcs][ru_column(n_ru)];
}

void TransportConfig::validate() const
{
    if (mcs_level < 0 || mcs_level > kMaxMcs)
    {
        throw DomainError("mcs_level = " + std::to_string(mcs_level) + " outside [0, 13]");
    }
    if (ru_format.single_tone() && mcs_level > kMaxSingleToneMcs)
    {
        throw DomainError("mcs_level = " + std::to_string(mcs_level)
                          + " is multi-tone only; single-tone formats allow 0..10");
    }
    ru_column(n_ru);
    if (std::find(kRepetitions.begin(), kRepetitions.end(), n_rep) == kRepetitions.end())
    {
        throw DomainError("n_rep = " + std::to_string(n_rep)
                          + " is not one of {1,2,4,8,16,32,64,128}");
    }
}

int TransportConfig::tbs() const
{
    return tbs_lookup(mcs_level, n_ru);
}

std::int64_t TransportConfig::block_duration_us() const
{
    return static_cast<std::int64_t>(n_ru) * ru_format.ru_duration_us() * n_rep;
}

std::int64_t block_count(double packet_bits, int tbs)
{
    if (!(packet_bits > 0.0))
    {
        throw DomainError("packet_bits must be > 0");
    }
    return static_cast<std::int64_t>(std::ceil(packet_bits / tbs));
}

double transmission_time(double packet_bits, const TransportConfig& cfg)
{
    cfg.validate();
    std::int64_t us = block_count(packet_bits, cfg.tbs()) * cfg.block_duration_us();
    return static_cast<double>(us) * 1e-6;
}

double data_rate(double packet_bits, const TransportConfig& cfg)
{
    return packet_bits / transmission_time(packet_bits, cfg);
}

double mean_field_rate(const TransportConfig& cfg)
{
    cfg.validate();
    return cfg.tbs() / (static_cast<double>(cfg.block_duration_us()) * 1e-6);
}

const std::array<PeakRate, 5>& peak_rate_table()
{
    static const std::array<PeakRate, 5> table{{
        {RuFormat::make(ToneBandwidth::khz3_75, 1), 8.0},
        {RuFormat::make(ToneBandwidth::khz15, 1), 32.0},
        {RuFormat::make(ToneBandwidth::khz15, 3), 64.0},
        {RuFormat::make(ToneBandwidth::khz15, 6), 129.0},
        {RuFormat::make(ToneBandwidth::khz15, 12), 258.0},
    }};
    return table;
}

} // namespace nbmf
