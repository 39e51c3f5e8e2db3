#include "rarl/baselines.hpp"

#include "rarl/errors.hpp"

#include <cmath>

namespace rarl {

namespace {

// Everything in the SNR expression except the -20 log10(D) term.
double snr_offset(const RadioConfig& r)
{
    return snr(r, 1.0);
}

}  // namespace

BalancePoint snr_balance_point(Position backhaul, Position fap, const RadioConfig& backhaul_radio,
                               const RadioConfig& fgw_radio, const Venue& venue)
{
    const double length = distance(backhaul, fap);
    if (!(length > 0.0)) {
        throw ContractViolation("snr_balance_point: backhaul and FAP coincide");
    }
    const double k = std::pow(10.0, (snr_offset(backhaul_radio) - snr_offset(fgw_radio)) / 20.0);
    const double f = k / (1.0 + k);
    BalancePoint bp;
    bp.distance_ratio = k;
    bp.exact = {backhaul.x + f * (fap.x - backhaul.x), backhaul.y + f * (fap.y - backhaul.y)};
    bp.snapped = venue.snap(bp.exact);
    return bp;
}

Position follow_fap_target(Position backhaul, Position fap_now, double ratio, const Venue& venue)
{
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw ContractViolation("follow_fap_target: ratio must lie in (0, 1)");
    }
    return venue.snap({backhaul.x + ratio * (fap_now.x - backhaul.x),
                       backhaul.y + ratio * (fap_now.y - backhaul.y)});
}

Position centroid_target(Position backhaul, Position fap1, Position fap2, const Venue& venue)
{
    return venue.snap({(backhaul.x + fap1.x + fap2.x) / 3.0, (backhaul.y + fap1.y + fap2.y) / 3.0});
}

Action baseline_policy_step(Position current, Position target)
{
    const double dx = target.x - current.x;
    const double dy = target.y - current.y;
    constexpr double eps = 1e-9;
    if (std::abs(dx) < eps && std::abs(dy) < eps) {
        return Action::Same;
    }
    if (std::abs(dx) >= std::abs(dy)) {
        return dx > 0 ? Action::Right : Action::Left;
    }
    return dy > 0 ? Action::Up : Action::Down;
}

std::string_view to_string(BaselineKind kind)
{
    switch (kind) {
    case BaselineKind::SnrBalance: return "snr-balance";
    case BaselineKind::FollowFap: return "follow-fap";
    case BaselineKind::Centroid: return "centroid";
    }
    return "?";
}

std::optional<BaselineKind> parse_baseline_kind(std::string_view name)
{
    for (auto k : {BaselineKind::SnrBalance, BaselineKind::FollowFap, BaselineKind::Centroid}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

BaselinePolicy::BaselinePolicy(BaselineKind kind, const ScenarioConfig& scenario)
    : kind_(kind), scenario_(scenario)
{
    if (kind_ == BaselineKind::Centroid && scenario_.fap_count() != 2) {
        throw ConfigError("policy centroid: requires a two-FAP scenario");
    }
    if (kind_ != BaselineKind::Centroid && scenario_.fap_count() != 1) {
        throw ConfigError(std::string("policy ") + std::string(to_string(kind_)) +
                          ": requires a single-FAP scenario");
    }
    if (kind_ == BaselineKind::FollowFap) {
        const double to_fgw = distance(scenario_.backhaul, scenario_.fgw_start);
        const double to_fap = distance(scenario_.fgw_start, scenario_.fap_position(0, 0.0));
        ratio_ = (to_fgw + to_fap) > 0.0 ? to_fgw / (to_fgw + to_fap) : 0.5;
        if (!(ratio_ > 0.0 && ratio_ < 1.0)) {
            ratio_ = 0.5;
        }
    }
}

Position BaselinePolicy::target(const NodePositions& nodes) const
{
    switch (kind_) {
    case BaselineKind::SnrBalance:
        return snr_balance_point(nodes.backhaul, nodes.faps.at(0), scenario_.backhaul_radio,
                                 scenario_.fgw_radio, scenario_.venue)
            .snapped;
    case BaselineKind::FollowFap:
        return follow_fap_target(nodes.backhaul, nodes.faps.at(0), ratio_, scenario_.venue);
    case BaselineKind::Centroid:
        return centroid_target(nodes.backhaul, nodes.faps.at(0), nodes.faps.at(1), scenario_.venue);
    }
    return nodes.fgw;
}

Action BaselinePolicy::act(const NodePositions& nodes) const
{
    return baseline_policy_step(nodes.fgw, target(nodes));
}

}  // namespace rarl
