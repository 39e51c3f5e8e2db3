#pragma once

#include "rarl/action.hpp"
#include "rarl/linksim.hpp"
#include "rarl/phy.hpp"
#include "rarl/scenario.hpp"
#include "rarl/venue.hpp"

#include <optional>
#include <string_view>

namespace rarl {

struct BalancePoint {
    Position exact;    // on the backhaul-FAP segment
    Position snapped;  // nearest grid point inside the venue
    double distance_ratio = 1.0;  // d_backhaul / d_fap
};

/// Point on the backhaul -> FAP segment where both hops see the same Friis
/// SNR: d_B / d_F = 10^((K_B - K_F) / 20) with K = P + G_tx + G_rx - noise
/// floor - 20 log10(f). Throws ContractViolation for coincident endpoints.
BalancePoint snr_balance_point(Position backhaul, Position fap, const RadioConfig& backhaul_radio,
                               const RadioConfig& fgw_radio, const Venue& venue);

/// backhaul + ratio * (fap - backhaul), snapped. ratio must lie in (0, 1).
Position follow_fap_target(Position backhaul, Position fap_now, double ratio, const Venue& venue);

/// Mean of the three positions, snapped.
Position centroid_target(Position backhaul, Position fap1, Position fap2, const Venue& venue);

/// One step toward `target`: Same when there, otherwise along the axis with
/// the larger remaining error (horizontal on ties).
Action baseline_policy_step(Position current, Position target);

enum class BaselineKind { SnrBalance, FollowFap, Centroid };

std::string_view to_string(BaselineKind kind);
std::optional<BaselineKind> parse_baseline_kind(std::string_view name);

/// Stateful geometric baseline driven by the environment's snapshots.
class BaselinePolicy {
public:
    BaselinePolicy(BaselineKind kind, const ScenarioConfig& scenario);

    /// Target for the nodes currently reported by the environment.
    Position target(const NodePositions& nodes) const;
    Action act(const NodePositions& nodes) const;

    BaselineKind kind() const { return kind_; }
    double follow_ratio() const { return ratio_; }

private:
    BaselineKind kind_;
    ScenarioConfig scenario_;
    double ratio_ = 0.5;  // FollowFap: fixed from the initial geometry
};

}  // namespace rarl
