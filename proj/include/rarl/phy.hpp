#pragma once

#include <vector>

namespace rarl {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kThermalNoiseDbmPerHz = -174.0;

/// Transmitter/receiver parameters of one directed link.
struct RadioConfig {
    double tx_power_dbm = 20.0;
    double tx_gain_dbi = 0.0;
    double rx_gain_dbi = 0.0;
    double frequency_hz = 5.18e9;
    double bandwidth_hz = 20e6;
    double noise_figure_db = 7.0;

    /// Throws ConfigError for non-positive frequency or bandwidth.
    void validate() const;

    friend bool operator==(const RadioConfig&, const RadioConfig&) = default;
};

struct LinkBudget {
    RadioConfig config;
    double distance_m = 1.0;
};

struct Mcs {
    int index = 0;
    double phy_rate_bps = 0.0;
    double min_snr_db = 0.0;

    friend bool operator==(const Mcs&, const Mcs&) = default;
};

using McsTable = std::vector<Mcs>;

/// HT MCS 0-7, 20 MHz, 800 ns guard interval, one spatial stream. Rates come
/// from 52 data subcarriers x coded bits x code rate / 4 us symbol.
const McsTable& ht20_mcs_table();

/// Throws ConfigError unless rates and SNR anchors are strictly increasing.
void validate_mcs_table(const McsTable& table);

/// Free-space received power, dBm. Throws DomainError for D <= 0 or f <= 0.
double friis_rx_power(const LinkBudget& budget);

/// kTB noise plus receiver noise figure, dBm.
double noise_floor(const RadioConfig& config);

/// friis_rx_power - noise_floor, dB.
double snr(const LinkBudget& budget);

inline double snr(const RadioConfig& config, double distance_m)
{
    return snr(LinkBudget{config, distance_m});
}

inline constexpr double kDefaultPerSteepness = 2.0;  // per dB

/// Logistic packet-error surrogate 1 / (1 + exp(k (snr - min_snr))).
/// packet_bits must be positive; the surrogate does not depend on it otherwise.
double per(const Mcs& mcs, double snr_db, int packet_bits,
           double steepness = kDefaultPerSteepness);

}  // namespace rarl
