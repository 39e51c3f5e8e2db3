#include "rarl/config.hpp"

#include "rarl/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rarl {

namespace {

using Json = nlohmann::ordered_json;

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

/// Object view that remembers which keys were consumed.
class Section {
public:
    Section(const Json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) {
            throw ConfigError(name() + ": expected an object");
        }
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const Json& raw(const std::string& key)
    {
        used_.insert(key);
        return j_.at(key);
    }

    Section child(const std::string& key)
    {
        return Section(raw(key), join(path_, key));
    }

    std::string path(const std::string& key) const { return join(path_, key); }

    void number(const std::string& key, double& out)
    {
        if (!has(key)) {
            return;
        }
        const Json& v = raw(key);
        if (!v.is_number()) {
            throw ConfigError(path(key) + ": expected a number");
        }
        out = v.get<double>();
        if (!std::isfinite(out)) {
            throw ConfigError(path(key) + ": must be finite");
        }
    }

    template <typename Int>
    void integer(const std::string& key, Int& out)
    {
        if (!has(key)) {
            return;
        }
        const Json& v = raw(key);
        if (!v.is_number_integer()) {
            throw ConfigError(path(key) + ": expected an integer");
        }
        if constexpr (std::is_unsigned_v<Int>) {
            if (v.is_number_unsigned() || v.get<std::int64_t>() >= 0) {
                out = v.get<Int>();
                return;
            }
            throw ConfigError(path(key) + ": must be non-negative");
        } else {
            out = v.get<Int>();
        }
    }

    std::string string(const std::string& key)
    {
        const Json& v = raw(key);
        if (!v.is_string()) {
            throw ConfigError(path(key) + ": expected a string");
        }
        return v.get<std::string>();
    }

    /// Rejects keys nobody asked for.
    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!used_.contains(it.key())) {
                throw ConfigError(path(it.key()) + ": unknown key");
            }
        }
    }

    std::string name() const { return path_.empty() ? "config" : path_; }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> used_;
};

Position parse_position(const Json& v, const std::string& path)
{
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ConfigError(path + ": expected [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

Json position_json(Position p)
{
    return Json::array({p.x, p.y});
}

void parse_radio(Section s, RadioConfig& r)
{
    s.number("tx_power_dbm", r.tx_power_dbm);
    s.number("tx_gain_dbi", r.tx_gain_dbi);
    s.number("rx_gain_dbi", r.rx_gain_dbi);
    s.number("frequency_hz", r.frequency_hz);
    s.number("bandwidth_hz", r.bandwidth_hz);
    s.number("noise_figure_db", r.noise_figure_db);
    s.finish();
}

Json radio_json(const RadioConfig& r)
{
    Json j;
    j["tx_power_dbm"] = r.tx_power_dbm;
    j["tx_gain_dbi"] = r.tx_gain_dbi;
    j["rx_gain_dbi"] = r.rx_gain_dbi;
    j["frequency_hz"] = r.frequency_hz;
    j["bandwidth_hz"] = r.bandwidth_hz;
    j["noise_figure_db"] = r.noise_figure_db;
    return j;
}

void parse_link(Section s, LinkConfig& link)
{
    s.number("mac_efficiency", link.mac_efficiency);
    s.number("per_steepness", link.per_steepness);
    if (s.has("ra")) {
        const std::string ra = s.string("ra");
        if (ra == "minstrel") {
            link.ra = RaKind::Minstrel;
        } else if (ra == "ideal") {
            link.ra = RaKind::Ideal;
        } else {
            throw ConfigError(s.path("ra") + ": expected \"minstrel\" or \"ideal\"");
        }
    }
    if (s.has("minstrel")) {
        Section m = s.child("minstrel");
        m.number("ewma_weight", link.minstrel.ewma_weight);
        m.number("update_interval_s", link.minstrel.update_interval_s);
        m.integer("probe_period", link.minstrel.probe_period);
        m.finish();
    }
    if (s.has("mcs")) {
        const Json& arr = s.raw("mcs");
        if (!arr.is_array() || arr.empty()) {
            throw ConfigError(s.path("mcs") + ": expected a non-empty array");
        }
        link.mcs.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Section e(arr[i], s.path("mcs") + "[" + std::to_string(i) + "]");
            Mcs m{static_cast<int>(i), 0.0, 0.0};
            if (!e.has("rate_bps") || !e.has("min_snr_db")) {
                throw ConfigError(e.name() + ": needs rate_bps and min_snr_db");
            }
            e.number("rate_bps", m.phy_rate_bps);
            e.number("min_snr_db", m.min_snr_db);
            e.finish();
            link.mcs.push_back(m);
        }
        try {
            validate_mcs_table(link.mcs);
        } catch (const ConfigError& err) {
            throw ConfigError(s.path("mcs") + ": " + err.what());
        }
    }
    s.finish();
}

Json link_json(const LinkConfig& link)
{
    Json j;
    j["mac_efficiency"] = link.mac_efficiency;
    j["per_steepness"] = link.per_steepness;
    j["ra"] = std::string(to_string(link.ra));
    j["minstrel"] = {{"ewma_weight", link.minstrel.ewma_weight},
                     {"update_interval_s", link.minstrel.update_interval_s},
                     {"probe_period", link.minstrel.probe_period}};
    Json mcs = Json::array();
    for (const Mcs& m : link.mcs) {
        mcs.push_back({{"rate_bps", m.phy_rate_bps}, {"min_snr_db", m.min_snr_db}});
    }
    j["mcs"] = mcs;
    return j;
}

void parse_agent(Section s, TrainSchedule& a)
{
    s.number("gamma", a.gamma);
    s.number("learning_rate", a.learning_rate);
    s.integer("batch_size", a.batch_size);
    s.integer("target_sync_period", a.target_sync_period);
    s.number("epsilon_start", a.epsilon_start);
    s.number("epsilon_end", a.epsilon_end);
    s.integer("epsilon_decay_steps", a.epsilon_decay_steps);
    s.integer("total_steps", a.total_steps);
    s.integer("learning_starts", a.learning_starts);
    s.integer("replay_capacity", a.replay_capacity);
    s.number("grad_clip_norm", a.grad_clip_norm);
    s.number("reward_scale", a.reward_scale);
    if (s.has("hidden_layers")) {
        const Json& h = s.raw("hidden_layers");
        if (!h.is_array()) {
            throw ConfigError(s.path("hidden_layers") + ": expected an array of integers");
        }
        a.hidden_layers.clear();
        for (const Json& v : h) {
            if (!v.is_number_integer()) {
                throw ConfigError(s.path("hidden_layers") + ": expected an array of integers");
            }
            a.hidden_layers.push_back(v.get<int>());
        }
    }
    s.finish();
}

Json agent_json(const TrainSchedule& a)
{
    Json j;
    j["gamma"] = a.gamma;
    j["learning_rate"] = a.learning_rate;
    j["batch_size"] = a.batch_size;
    j["target_sync_period"] = a.target_sync_period;
    j["epsilon_start"] = a.epsilon_start;
    j["epsilon_end"] = a.epsilon_end;
    j["epsilon_decay_steps"] = a.epsilon_decay_steps;
    j["total_steps"] = a.total_steps;
    j["learning_starts"] = a.learning_starts;
    j["replay_capacity"] = a.replay_capacity;
    j["grad_clip_norm"] = a.grad_clip_norm;
    j["reward_scale"] = a.reward_scale;
    j["hidden_layers"] = a.hidden_layers;
    return j;
}

// Rewrites ConfigErrors from validate() unchanged; they already name the field.
ScenarioConfig parse_document(const Json& doc)
{
    Section root(doc, "");
    if (!root.has("kind")) {
        throw ConfigError("kind: missing required key");
    }
    const std::string kind_name = root.string("kind");
    const auto kind = parse_scenario_kind(kind_name);
    if (!kind) {
        throw ConfigError("kind: unknown scenario kind \"" + kind_name + "\"");
    }
    ScenarioConfig c = ScenarioConfig::defaults(*kind);

    if (*kind == ScenarioKind::Custom) {
        for (const char* key : {"backhaul", "faps", "fgw_start"}) {
            if (!root.has(key)) {
                throw ConfigError(std::string(key) + ": missing required key for kind custom");
            }
        }
    }

    root.integer("seed", c.seed);
    if (root.has("venue")) {
        Section v = root.child("venue");
        v.number("width", c.venue.width);
        v.number("height", c.venue.height);
        v.number("step", c.venue.step);
        v.number("decision_interval", c.venue.decision_interval);
        v.finish();
    }
    if (root.has("backhaul")) {
        c.backhaul = parse_position(root.raw("backhaul"), "backhaul");
    }
    if (root.has("fgw_start")) {
        c.fgw_start = parse_position(root.raw("fgw_start"), "fgw_start");
    }
    if (root.has("faps")) {
        const Json& arr = root.raw("faps");
        if (!arr.is_array()) {
            throw ConfigError("faps: expected an array of [x, y]");
        }
        c.faps.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            c.faps.push_back(parse_position(arr[i], "faps[" + std::to_string(i) + "]"));
        }
    }

    bool schedule_given = false;
    if (root.has("waypoints")) {
        const Json& arr = root.raw("waypoints");
        if (!arr.is_array()) {
            throw ConfigError("waypoints: expected an array");
        }
        std::vector<Waypoint> w;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = "waypoints[" + std::to_string(i) + "]";
            Section e(arr[i], p);
            if (!e.has("t") || !e.has("pos")) {
                throw ConfigError(p + ": needs t and pos");
            }
            Waypoint wp;
            e.number("t", wp.time);
            wp.target = parse_position(e.raw("pos"), p + ".pos");
            e.finish();
            w.push_back(wp);
        }
        try {
            c.fap_schedule = WaypointSchedule(std::move(w));
        } catch (const ConfigError& err) {
            throw ConfigError(std::string("waypoints: ") + err.what());
        }
        schedule_given = true;
    }
    if (root.has("segment_s")) {
        double segment = 20.0;
        root.number("segment_s", segment);
        if (schedule_given) {
            throw ConfigError("segment_s: cannot be combined with explicit waypoints");
        }
        if (*kind != ScenarioKind::MovingFap) {
            throw ConfigError("segment_s: only valid for kind moving-fap");
        }
        if (!(segment > 0.0)) {
            throw ConfigError("segment_s: must be positive");
        }
        c.fap_schedule = default_moving_schedule(segment);
        schedule_given = true;
    }
    if (c.is_moving()) {
        c.faps = {c.fap_schedule.position_at(0.0)};
    }

    if (root.has("radio")) {
        Section r = root.child("radio");
        if (r.has("backhaul")) {
            parse_radio(r.child("backhaul"), c.backhaul_radio);
        }
        if (r.has("fgw")) {
            parse_radio(r.child("fgw"), c.fgw_radio);
        }
        r.finish();
    }
    if (root.has("traffic")) {
        Section t = root.child("traffic");
        t.number("udp_rate_bps", c.traffic.udp_rate_bps);
        t.integer("packet_size_bytes", c.traffic.packet_size_bytes);
        t.finish();
    }
    if (root.has("link")) {
        parse_link(root.child("link"), c.link);
    }
    if (root.has("reward")) {
        Section r = root.child("reward");
        if (r.has("mode")) {
            const std::string m = r.string("mode");
            const auto mode = parse_reward_mode(m);
            if (!mode) {
                throw ConfigError("reward.mode: expected \"snr\" or \"throughput\"");
            }
            c.reward.mode = *mode;
        }
        r.number("imbalance_weight", c.reward.imbalance_weight);
        r.finish();
    }
    if (root.has("horizon")) {
        root.integer("horizon", c.horizon);
    } else if (c.is_moving()) {
        c.horizon = static_cast<int>(std::lround(c.fap_schedule.end_time())) + kMovingSettleSteps;
    }
    if (root.has("agent")) {
        parse_agent(root.child("agent"), c.agent);
    }
    root.finish();
    c.validate();
    return c;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text)
{
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: not valid JSON: ") + e.what());
    }
    try {
        return parse_document(doc);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file: " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string serialize_config(const ScenarioConfig& c)
{
    Json j;
    j["kind"] = std::string(to_string(c.kind));
    j["seed"] = c.seed;
    j["venue"] = {{"width", c.venue.width},
                  {"height", c.venue.height},
                  {"step", c.venue.step},
                  {"decision_interval", c.venue.decision_interval}};
    j["backhaul"] = position_json(c.backhaul);
    Json faps = Json::array();
    for (const Position& p : c.faps) {
        faps.push_back(position_json(p));
    }
    j["faps"] = faps;
    if (c.is_moving()) {
        Json w = Json::array();
        for (const Waypoint& wp : c.fap_schedule.waypoints()) {
            w.push_back({{"t", wp.time}, {"pos", position_json(wp.target)}});
        }
        j["waypoints"] = w;
    }
    j["fgw_start"] = position_json(c.fgw_start);
    j["radio"] = {{"backhaul", radio_json(c.backhaul_radio)}, {"fgw", radio_json(c.fgw_radio)}};
    j["traffic"] = {{"udp_rate_bps", c.traffic.udp_rate_bps},
                    {"packet_size_bytes", c.traffic.packet_size_bytes}};
    j["link"] = link_json(c.link);
    j["reward"] = {{"mode", std::string(to_string(c.reward.mode))},
                   {"imbalance_weight", c.reward.imbalance_weight}};
    j["horizon"] = c.horizon;
    j["agent"] = agent_json(c.agent);
    return j.dump(2) + "\n";
}

}  // namespace rarl
