#include "rarl/ra.hpp"

#include "rarl/errors.hpp"

#include <algorithm>

namespace rarl {

void MinstrelParams::validate() const
{
    if (!(ewma_weight > 0.0 && ewma_weight <= 1.0)) {
        throw ConfigError("minstrel.ewma_weight: must be in (0, 1]");
    }
    if (!(update_interval_s > 0.0)) {
        throw ConfigError("minstrel.update_interval_s: must be positive");
    }
    if (probe_period < 1) {
        throw ConfigError("minstrel.probe_period: must be at least 1");
    }
}

MinstrelState MinstrelState::initial(std::size_t rate_count, MinstrelParams params)
{
    MinstrelState s;
    s.params = params;
    s.ewma_success.assign(rate_count, 0.0);
    if (rate_count > 0) {
        s.ewma_success[0] = 1.0;
    }
    s.window.assign(rate_count, RateOutcome{});
    return s;
}

bool MinstrelState::probe_due() const
{
    const auto period = static_cast<std::uint64_t>(params.probe_period);
    return period > 1 && probe_counter % period == period - 1;
}

double ewma_update(double prev, double window_success, double weight)
{
    const double v = (1.0 - weight) * prev + weight * window_success;
    return std::clamp(v, 0.0, 1.0);
}

int best_throughput_rate(std::span<const double> ewma, const McsTable& table)
{
    int best = 0;
    double best_value = -1.0;
    for (std::size_t i = 0; i < ewma.size() && i < table.size(); ++i) {
        const double value = table[i].phy_rate_bps * ewma[i];
        if (value > best_value) {
            best_value = value;
            best = static_cast<int>(i);
        }
    }
    return best;
}

RaDecision select_rate(const MinstrelState& state, const McsTable& table, Rng& rng)
{
    if (state.probe_due() && table.size() > 1) {
        // Uniform over the rates other than the current one.
        auto pick = static_cast<int>(uniform_index(rng, table.size() - 1));
        if (pick >= state.current_rate) {
            ++pick;
        }
        return {pick, true};
    }
    return {best_throughput_rate(state.ewma_success, table), false};
}

MinstrelState on_window_end(MinstrelState state, std::span<const RateOutcome> outcomes,
                            const McsTable& table)
{
    const std::size_t n = state.ewma_success.size();
    state.window.resize(n);
    for (std::size_t i = 0; i < outcomes.size() && i < n; ++i) {
        state.window[i].attempts += outcomes[i].attempts;
        state.window[i].successes += outcomes[i].successes;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const RateOutcome& o = state.window[i];
        if (o.successes > o.attempts || o.successes < 0) {
            throw ContractViolation("on_window_end: successes exceed attempts");
        }
        if (o.attempts > 0) {
            const double ratio = static_cast<double>(o.successes) / static_cast<double>(o.attempts);
            state.ewma_success[i] =
                ewma_update(state.ewma_success[i], ratio, state.params.ewma_weight);
        }
    }
    std::fill(state.window.begin(), state.window.end(), RateOutcome{});
    state.current_rate = best_throughput_rate(state.ewma_success, table);
    ++state.probe_counter;
    return state;
}

int ideal_rate(double snr_db, const McsTable& table)
{
    int best = 0;
    for (const Mcs& m : table) {
        if (m.min_snr_db <= snr_db) {
            best = m.index;
        }
    }
    return best;
}

std::string_view to_string(RaKind kind)
{
    return kind == RaKind::Minstrel ? "minstrel" : "ideal";
}

RateController::RateController(RaKind kind, const McsTable& table, MinstrelParams params)
    : kind_(kind), table_(table), minstrel_(MinstrelState::initial(table.size(), params))
{
}

RaDecision RateController::decide(double snr_db, Rng& rng) const
{
    if (kind_ == RaKind::Ideal) {
        return {ideal_rate(snr_db, table_), false};
    }
    return select_rate(minstrel_, table_, rng);
}

void RateController::finish_window(int rate, std::int64_t attempts, std::int64_t successes)
{
    if (kind_ == RaKind::Ideal) {
        return;
    }
    RateOutcome& slot = minstrel_.window.at(static_cast<std::size_t>(rate));
    slot.attempts += attempts;
    slot.successes += successes;
    minstrel_ = on_window_end(std::move(minstrel_), {}, table_);
}

int RateController::current_rate(double snr_db) const
{
    return kind_ == RaKind::Ideal ? ideal_rate(snr_db, table_) : minstrel_.current_rate;
}

}  // namespace rarl
