#include "rarl/linksim.hpp"

#include "rarl/errors.hpp"
#include "rarl/phy.hpp"

#include <algorithm>
#include <cmath>

namespace rarl {

double link_distance(Position a, Position b)
{
    return std::max(distance(a, b), kMinLinkDistance);
}

RelaySimulator::RelaySimulator(const ScenarioConfig& scenario, std::uint64_t seed)
    : scenario_(scenario),
      window_s_(scenario.link.minstrel.update_interval_s),
      windows_per_interval_(static_cast<int>(
          std::lround(scenario.venue.decision_interval / scenario.link.minstrel.update_interval_s))),
      backhaul_{RateController(scenario.link.ra, scenario.link.mcs, scenario.link.minstrel)},
      rng_(seed)
{
    scenario_.validate();
    for (std::size_t i = 0; i < scenario_.fap_count(); ++i) {
        fap_links_.push_back(
            {RateController(scenario_.link.ra, scenario_.link.mcs, scenario_.link.minstrel)});
    }
    source_credit_.assign(scenario_.fap_count(), 0.0);
    pending_.assign(scenario_.fap_count(), 0);
}

double RelaySimulator::window_capacity(int rate) const
{
    const double phy = scenario_.link.mcs.at(static_cast<std::size_t>(rate)).phy_rate_bps;
    return phy * scenario_.link.mac_efficiency * window_s_ /
           static_cast<double>(scenario_.traffic.packet_bits());
}

RelaySimulator::WindowResult RelaySimulator::transmit(LinkState& link, double snr_db,
                                                      std::int64_t offered)
{
    const RaDecision decision = link.ra.decide(snr_db, rng_);
    link.credit += window_capacity(decision.rate);
    const auto capacity = static_cast<std::int64_t>(std::floor(link.credit));
    WindowResult r;
    r.rate = decision.rate;
    r.sent = std::min(offered, capacity);
    link.credit -= static_cast<double>(r.sent);
    if (link.credit >= 1.0) {
        // Idle capacity is not banked beyond a fractional packet.
        link.credit -= std::floor(link.credit);
    }
    const double success = 1.0 - per(scenario_.link.mcs.at(static_cast<std::size_t>(decision.rate)),
                                     snr_db, scenario_.traffic.packet_bits(),
                                     scenario_.link.per_steepness);
    r.delivered = binomial(rng_, r.sent, success);
    link.ra.finish_window(decision.rate, r.sent, r.delivered);
    return r;
}

NetworkSnapshot RelaySimulator::simulate_interval(const NodePositions& nodes, double time_end)
{
    const std::size_t flows = fap_links_.size();
    if (nodes.faps.size() != flows) {
        throw ConfigError("simulate_interval: node positions do not match the scenario topology");
    }
    const double snr_backhaul = snr(scenario_.backhaul_radio, link_distance(nodes.backhaul, nodes.fgw));
    std::vector<double> snr_fap(flows);
    for (std::size_t i = 0; i < flows; ++i) {
        snr_fap[i] = snr(scenario_.fgw_radio, link_distance(nodes.fgw, nodes.faps[i]));
    }

    NetworkSnapshot snap;
    snap.time_s = time_end;
    snap.nodes = nodes;
    snap.fap_links.resize(flows);

    const double source_packets_per_window = scenario_.offered_packets_per_second() * window_s_;
    std::vector<std::int64_t> offered(flows);
    std::vector<std::int64_t> sent(flows);
    std::vector<std::int64_t> received(flows);

    for (int w = 0; w < windows_per_interval_; ++w) {
        std::int64_t offered_total = 0;
        for (std::size_t f = 0; f < flows; ++f) {
            source_credit_[f] += source_packets_per_window;
            offered[f] = static_cast<std::int64_t>(std::floor(source_credit_[f]));
            source_credit_[f] -= static_cast<double>(offered[f]);
            offered_total += offered[f];
        }

        // Backhaul -> FGW. Sample the whole window at once to learn the
        // number of transmitted packets, then split per flow round-robin.
        const RaDecision decision = backhaul_.ra.decide(snr_backhaul, rng_);
        backhaul_.credit += window_capacity(decision.rate);
        const std::int64_t capacity = static_cast<std::int64_t>(std::floor(backhaul_.credit));
        const std::int64_t total_sent = std::min(offered_total, capacity);
        backhaul_.credit -= static_cast<double>(total_sent);
        if (backhaul_.credit >= 1.0) {
            backhaul_.credit -= std::floor(backhaul_.credit);
        }
        const auto share = total_sent / static_cast<std::int64_t>(flows);
        auto extra = static_cast<std::size_t>(total_sent % static_cast<std::int64_t>(flows));
        for (std::size_t f = 0; f < flows; ++f) {
            sent[f] = share;
        }
        for (std::size_t k = 0; k < extra; ++k) {
            sent[(round_robin_next_ + k) % flows] += 1;
        }
        round_robin_next_ = (round_robin_next_ + extra) % flows;

        const double success_backhaul =
            1.0 - per(scenario_.link.mcs.at(static_cast<std::size_t>(decision.rate)), snr_backhaul,
                      scenario_.traffic.packet_bits(), scenario_.link.per_steepness);
        std::int64_t delivered_total = 0;
        for (std::size_t f = 0; f < flows; ++f) {
            received[f] = binomial(rng_, sent[f], success_backhaul);
            delivered_total += received[f];
        }
        backhaul_.ra.finish_window(decision.rate, total_sent, delivered_total);
        snap.backhaul_link.offered_packets += offered_total;
        snap.backhaul_link.delivered_packets += delivered_total;

        // FGW -> FAP i forwards what arrived in the previous window.
        for (std::size_t f = 0; f < flows; ++f) {
            const WindowResult r = transmit(fap_links_[f], snr_fap[f], pending_[f]);
            snap.fap_links[f].offered_packets += pending_[f];
            snap.fap_links[f].delivered_packets += r.delivered;
            pending_[f] = received[f];
        }
    }

    const double bits = static_cast<double>(scenario_.traffic.packet_bits());
    const double interval = scenario_.venue.decision_interval;
    auto finish = [&](LinkMetrics& m, double snr_db, const RateController& ra) {
        m.snr_db = snr_db;
        m.throughput_bps = static_cast<double>(m.delivered_packets) * bits / interval;
        m.chosen_rate = ra.current_rate(snr_db);
    };
    finish(snap.backhaul_link, snr_backhaul, backhaul_.ra);
    for (std::size_t f = 0; f < flows; ++f) {
        finish(snap.fap_links[f], snr_fap[f], fap_links_[f].ra);
    }
    return snap;
}

std::vector<SweepSample> sweep_diagonal(const ScenarioConfig& scenario, std::uint64_t seed)
{
    if (scenario.is_moving()) {
        throw ConfigError("sweep: requires a static scenario (no waypoints)");
    }
    RelaySimulator sim(scenario, seed);
    const Venue& v = scenario.venue;
    const std::size_t count = std::min(v.columns(), v.rows()) - 2;
    std::vector<SweepSample> samples;
    samples.reserve(count);
    for (std::size_t k = 1; k <= count; ++k) {
        const Position fgw{static_cast<double>(k) * v.step, static_cast<double>(k) * v.step};
        NodePositions nodes{scenario.backhaul, fgw, scenario.faps};
        const double t = static_cast<double>(k) * v.decision_interval;
        samples.push_back({fgw, sim.simulate_interval(nodes, t)});
    }
    return samples;
}

ExpectedThroughput expected_throughput(const ScenarioConfig& scenario, Position fgw,
                                       const std::vector<Position>& faps)
{
    const LinkConfig& link = scenario.link;
    const int bits = scenario.traffic.packet_bits();
    auto carried = [&](double snr_db, double offered_bps) {
        const Mcs& mcs = link.mcs.at(static_cast<std::size_t>(ideal_rate(snr_db, link.mcs)));
        const double sent = std::min(offered_bps, mcs.phy_rate_bps * link.mac_efficiency);
        return sent * (1.0 - per(mcs, snr_db, bits, link.per_steepness));
    };

    ExpectedThroughput out;
    const double flows = static_cast<double>(faps.size());
    const double snr_backhaul = snr(scenario.backhaul_radio, link_distance(scenario.backhaul, fgw));
    out.fgw_bps = carried(snr_backhaul, scenario.traffic.udp_rate_bps * flows);
    for (const Position& fap : faps) {
        const double snr_fap = snr(scenario.fgw_radio, link_distance(fgw, fap));
        out.fap_bps.push_back(carried(snr_fap, out.fgw_bps / flows));
    }
    return out;
}

}  // namespace rarl
