#include "rarl/phy.hpp"

#include "rarl/errors.hpp"

#include <cmath>
#include <numbers>

namespace rarl {

namespace {

McsTable build_ht20_table()
{
    constexpr double kDataSubcarriers = 52.0;
    constexpr double kSymbolDuration = 4e-6;
    struct Modulation {
        double coded_bits;
        double code_rate;
    };
    // BPSK 1/2, QPSK 1/2, QPSK 3/4, 16-QAM 1/2, 16-QAM 3/4, 64-QAM 2/3, 3/4, 5/6
    constexpr Modulation kModulations[] = {{1, 1.0 / 2}, {2, 1.0 / 2}, {2, 3.0 / 4},
                                           {4, 1.0 / 2}, {4, 3.0 / 4}, {6, 2.0 / 3},
                                           {6, 3.0 / 4}, {6, 5.0 / 6}};
    constexpr double kMinSnr[] = {2, 5, 9, 11, 15, 18, 20, 25};

    McsTable table;
    for (int i = 0; i < 8; ++i) {
        const double rate = kDataSubcarriers * kModulations[i].coded_bits *
                            kModulations[i].code_rate / kSymbolDuration;
        table.push_back({i, std::round(rate), kMinSnr[i]});
    }
    return table;
}

}  // namespace

void RadioConfig::validate() const
{
    if (!(frequency_hz > 0.0)) {
        throw ConfigError("frequency_hz: must be positive");
    }
    if (!(bandwidth_hz > 0.0)) {
        throw ConfigError("bandwidth_hz: must be positive");
    }
}

const McsTable& ht20_mcs_table()
{
    static const McsTable table = build_ht20_table();
    return table;
}

void validate_mcs_table(const McsTable& table)
{
    if (table.empty()) {
        throw ConfigError("mcs table: must not be empty");
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (table[i].index != static_cast<int>(i)) {
            throw ConfigError("mcs table: indices must be 0..n-1 in order");
        }
        if (i > 0 && (table[i].phy_rate_bps <= table[i - 1].phy_rate_bps ||
                      table[i].min_snr_db <= table[i - 1].min_snr_db)) {
            throw ConfigError("mcs table: rates and min_snr must be strictly increasing");
        }
    }
}

double friis_rx_power(const LinkBudget& budget)
{
    if (!(budget.distance_m > 0.0)) {
        throw DomainError("friis_rx_power: distance must be positive");
    }
    if (!(budget.config.frequency_hz > 0.0)) {
        throw DomainError("friis_rx_power: frequency must be positive");
    }
    const RadioConfig& c = budget.config;
    const double path_gain =
        kSpeedOfLight / (4.0 * std::numbers::pi * budget.distance_m * c.frequency_hz);
    return c.tx_power_dbm + c.tx_gain_dbi + c.rx_gain_dbi + 20.0 * std::log10(path_gain);
}

double noise_floor(const RadioConfig& config)
{
    return kThermalNoiseDbmPerHz + 10.0 * std::log10(config.bandwidth_hz) +
           config.noise_figure_db;
}

double snr(const LinkBudget& budget)
{
    return friis_rx_power(budget) - noise_floor(budget.config);
}

double per(const Mcs& mcs, double snr_db, int packet_bits, double steepness)
{
    if (packet_bits <= 0) {
        throw ContractViolation("per: packet_bits must be positive");
    }
    const double z = steepness * (snr_db - mcs.min_snr_db);
    // exp overflows to inf for very large z, which correctly yields 0.
    return 1.0 / (1.0 + std::exp(z));
}

}  // namespace rarl
