#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace nbmf {

enum class ToneBandwidth
{
    khz3_75,
    khz15,
};

double tone_bandwidth_hz(ToneBandwidth bw);
std::string to_string(ToneBandwidth bw);

/// One NPUSCH format-1 resource-unit layout. Only the five standard
/// layouts can be constructed.
class RuFormat
{
  public:
    /// Throws DomainError if (bw, tones) is not a standard layout.
    static RuFormat make(ToneBandwidth bw, int tones_per_ru);

    /// 15 kHz single tone, the solver's default numerology.
    static RuFormat single_tone_15khz() { return make(ToneBandwidth::khz15, 1); }

    ToneBandwidth tone_bandwidth() const { return bw_; }
    int tones_per_ru() const { return tones_; }
    int slots_per_ru() const { return slots_; }
    std::int64_t slot_duration_us() const { return slot_us_; }
    std::int64_t ru_duration_us() const { return slots_ * slot_us_; }
    double ru_duration_s() const { return static_cast<double>(ru_duration_us()) * 1e-6; }
    bool single_tone() const { return tones_ == 1; }

    friend bool operator==(const RuFormat&, const RuFormat&) = default;

  private:
    RuFormat(ToneBandwidth bw, int tones, int slots, std::int64_t slot_us)
        : bw_(bw), tones_(tones), slots_(slots), slot_us_(slot_us)
    {
    }

    ToneBandwidth bw_;
    int tones_;
    int slots_;
    std::int64_t slot_us_;
};

/// All standard RU layouts in table order.
const std::array<RuFormat, 5>& ru_formats();

inline constexpr std::array<int, 8> kRuCounts{1, 2, 3, 4, 5, 6, 8, 10};
inline constexpr std::array<int, 8> kRepetitions{1, 2, 4, 8, 16, 32, 64, 128};
inline constexpr int kMaxMcs = 13;
/// MCS levels above this one are multi-tone only.
inline constexpr int kMaxSingleToneMcs = 10;

struct TransportConfig
{
    RuFormat ru_format = RuFormat::single_tone_15khz();
    int mcs_level = 8;
    int n_ru = 1;
    int n_rep = 1;

    /// Throws DomainError naming the offending field.
    void validate() const;
    int tbs() const;
    /// Duration of one transport block including repetitions.
    std::int64_t block_duration_us() const;
};

/// Transport block size in bits for NPUSCH format 1 (Rel-14 table).
int tbs_lookup(int mcs, int n_ru);

/// Number of transport blocks needed for a packet.
std::int64_t block_count(double packet_bits, int tbs);

/// Time to send a packet: ceil(bits/TBS) * n_ru * T_ru * n_rep, in seconds.
double transmission_time(double packet_bits, const TransportConfig& cfg);

/// Per-packet data rate in bit/s.
double data_rate(double packet_bits, const TransportConfig& cfg);

/// Homogeneous rate TBS / (n_ru * T_ru * n_rep) used by the mean-field
/// model. Upper-bounds data_rate for every packet size.
double mean_field_rate(const TransportConfig& cfg);

struct PeakRate
{
    RuFormat format;
    double kbps;
};

/// Published uplink peak rates per RU layout (reference data).
const std::array<PeakRate, 5>& peak_rate_table();

} // namespace nbmf
