#include "apu/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace apu {

using nlohmann::json;

std::string_view to_string(Strategy strategy)
{
    switch (strategy) {
    case Strategy::Periodic: return "PB";
    case Strategy::Distance: return "DB";
    case Strategy::Speed: return "SB";
    case Strategy::Adaptive: return "APU";
    }
    return "unknown";
}

Strategy strategy_from_string(std::string_view name)
{
    for (Strategy s : {Strategy::Periodic, Strategy::Distance, Strategy::Speed, Strategy::Adaptive}) {
        if (to_string(s) == name) return s;
    }
    throw ConfigError("strategy.name", "unknown strategy '" + std::string(name) + "' (expected PB, DB, SB or APU)");
}

RadioModel ScenarioConfig::radio_model() const
{
    return {radio, radio_range, radio == RadioKind::LossyDisk ? loss_probability : 0.0};
}

namespace {

std::string_view mobility_name(MobilityModel model)
{
    switch (model) {
    case MobilityModel::Static: return "static";
    case MobilityModel::RandomWaypoint: return "random_waypoint";
    case MobilityModel::Scripted: return "scripted";
    }
    return "unknown";
}

std::string_view radio_name(RadioKind kind)
{
    return kind == RadioKind::UnitDisk ? "unit_disk" : "lossy_disk";
}

void require(bool ok, const char* field, const std::string& message)
{
    if (!ok) throw ConfigError(field, message);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }
bool finite_nonnegative(double v) { return std::isfinite(v) && v >= 0.0; }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json to_json(const ScenarioConfig& c)
{
    json placement = json::array();
    for (const NodeSpec& node : c.placement) {
        json script = json::array();
        for (const ScriptedLeg& leg : node.script) {
            script.push_back({{"x", leg.target.x}, {"y", leg.target.y}, {"speed", leg.speed}, {"pause", leg.pause}});
        }
        json entry = {{"x", node.position.x}, {"y", node.position.y}};
        if (!script.empty()) entry["script"] = std::move(script);
        placement.push_back(std::move(entry));
    }
    json flows = json::array();
    for (const FlowSpec& flow : c.flows) {
        json entry = {{"source", flow.source}, {"destination", flow.destination}};
        if (flow.start) entry["start"] = *flow.start;
        if (flow.stop) entry["stop"] = *flow.stop;
        flows.push_back(std::move(entry));
    }
    const StrategyParams& p = c.params;
    return json{
        {"area", {{"a", c.area_a}, {"b", c.area_b}}},
        {"nodes", {{"count", c.node_count}, {"placement", std::move(placement)}}},
        {"mobility",
         {{"model", mobility_name(c.mobility)},
          {"min_speed", c.min_speed},
          {"max_speed", c.max_speed},
          {"pause_time", c.pause_time}}},
        {"radio",
         {{"model", radio_name(c.radio)},
          {"range", c.radio_range},
          {"loss_probability", c.loss_probability},
          {"retry_limit", c.retry_limit},
          {"p2p_rate_bps", c.p2p_rate_bps},
          {"broadcast_rate_bps", c.broadcast_rate_bps},
          {"processing_delay", c.processing_delay}}},
        {"traffic",
         {{"flow_count", c.flow_count},
          {"packet_rate", c.packet_rate},
          {"packet_size", c.packet_size},
          {"start", c.traffic_start},
          {"max_hops", c.max_hops},
          {"flows", std::move(flows)}}},
        {"strategy",
         {{"name", to_string(c.strategy)},
          {"periodic_interval", p.periodic_interval},
          {"distance_threshold", p.distance_threshold},
          {"speed_interval_max", p.speed_interval_max},
          {"speed_interval_min", p.speed_interval_min},
          {"speed_low", p.speed_low},
          {"speed_high", optional_json(p.speed_high)},
          {"acceptable_error", optional_json(p.acceptable_error)},
          {"timeout_factor", p.timeout_factor},
          {"beacon_size", c.beacon_size}}},
        {"perturbations", {{"localization_sigma", c.localization_sigma}}},
        {"timing",
         {{"duration", c.duration},
          {"tick_interval", c.tick_interval},
          {"metrics_sample_interval", c.metrics_sample_interval}}},
        {"seed", c.seed},
    };
}

/// Reads keys out of one JSON object, remembering which ones were consumed so
/// leftovers can be reported as unknown.
class Section {
public:
    Section(const json& object, std::string path) : object_(object), path_(std::move(path))
    {
        if (!object_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    template <typename T>
    void read(const char* key, T& out)
    {
        const json* value = take(key);
        if (value == nullptr) return;
        try {
            out = value->get<T>();
        } catch (const json::exception&) {
            throw ConfigError(field(key), "wrong type");
        }
    }

    void read(const char* key, std::optional<double>& out)
    {
        const json* value = take(key);
        if (value == nullptr) return;
        if (value->is_null()) {
            out.reset();
            return;
        }
        if (!value->is_number()) throw ConfigError(field(key), "expected a number or null");
        out = value->get<double>();
    }

    /// Unsigned fields must not silently wrap from negative input.
    template <typename T>
    void read_count(const char* key, T& out)
    {
        const json* value = take(key);
        if (value == nullptr) return;
        if (!value->is_number_integer() || value->get<std::int64_t>() < 0) {
            throw ConfigError(field(key), "expected a nonnegative integer");
        }
        out = value->get<T>();
    }

    const json* take(const char* key)
    {
        consumed_.insert(key);
        auto it = object_.find(key);
        return it == object_.end() ? nullptr : &*it;
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const
    {
        for (auto it = object_.begin(); it != object_.end(); ++it) {
            if (!consumed_.contains(it.key())) throw ConfigError(field(it.key()), "unknown key");
        }
    }

private:
    const json& object_;
    std::string path_;
    std::set<std::string> consumed_;
};

ScenarioConfig from_json(const json& root)
{
    ScenarioConfig c;
    Section top(root, "");

    if (const json* area = top.take("area")) {
        Section s(*area, "area");
        s.read("a", c.area_a);
        s.read("b", c.area_b);
        s.finish();
    }
    if (const json* nodes = top.take("nodes")) {
        Section s(*nodes, "nodes");
        s.read_count("count", c.node_count);
        if (const json* placement = s.take("placement")) {
            if (!placement->is_array()) throw ConfigError("nodes.placement", "expected an array");
            for (std::size_t i = 0; i < placement->size(); ++i) {
                const std::string path = "nodes.placement[" + std::to_string(i) + "]";
                Section n((*placement)[i], path);
                NodeSpec spec;
                n.read("x", spec.position.x);
                n.read("y", spec.position.y);
                if (const json* script = n.take("script")) {
                    if (!script->is_array()) throw ConfigError(path + ".script", "expected an array");
                    for (std::size_t k = 0; k < script->size(); ++k) {
                        Section l((*script)[k], path + ".script[" + std::to_string(k) + "]");
                        ScriptedLeg leg;
                        l.read("x", leg.target.x);
                        l.read("y", leg.target.y);
                        l.read("speed", leg.speed);
                        l.read("pause", leg.pause);
                        l.finish();
                        spec.script.push_back(leg);
                    }
                }
                n.finish();
                c.placement.push_back(std::move(spec));
            }
        }
        s.finish();
    }
    if (const json* mobility = top.take("mobility")) {
        Section s(*mobility, "mobility");
        std::string model(mobility_name(c.mobility));
        s.read("model", model);
        if (model == "static") {
            c.mobility = MobilityModel::Static;
        } else if (model == "random_waypoint") {
            c.mobility = MobilityModel::RandomWaypoint;
        } else if (model == "scripted") {
            c.mobility = MobilityModel::Scripted;
        } else {
            throw ConfigError("mobility.model", "unknown model '" + model + "'");
        }
        s.read("min_speed", c.min_speed);
        s.read("max_speed", c.max_speed);
        s.read("pause_time", c.pause_time);
        s.finish();
    }
    if (const json* radio = top.take("radio")) {
        Section s(*radio, "radio");
        std::string model(radio_name(c.radio));
        s.read("model", model);
        if (model == "unit_disk") {
            c.radio = RadioKind::UnitDisk;
        } else if (model == "lossy_disk") {
            c.radio = RadioKind::LossyDisk;
        } else {
            throw ConfigError("radio.model", "unknown model '" + model + "'");
        }
        s.read("range", c.radio_range);
        s.read("loss_probability", c.loss_probability);
        s.read("retry_limit", c.retry_limit);
        s.read("p2p_rate_bps", c.p2p_rate_bps);
        s.read("broadcast_rate_bps", c.broadcast_rate_bps);
        s.read("processing_delay", c.processing_delay);
        s.finish();
    }
    if (const json* traffic = top.take("traffic")) {
        Section s(*traffic, "traffic");
        s.read_count("flow_count", c.flow_count);
        s.read("packet_rate", c.packet_rate);
        s.read_count("packet_size", c.packet_size);
        s.read("start", c.traffic_start);
        s.read_count("max_hops", c.max_hops);
        if (const json* flows = s.take("flows")) {
            if (!flows->is_array()) throw ConfigError("traffic.flows", "expected an array");
            for (std::size_t i = 0; i < flows->size(); ++i) {
                Section f((*flows)[i], "traffic.flows[" + std::to_string(i) + "]");
                FlowSpec flow;
                f.read_count("source", flow.source);
                f.read_count("destination", flow.destination);
                f.read("start", flow.start);
                f.read("stop", flow.stop);
                f.finish();
                c.flows.push_back(flow);
            }
        }
        s.finish();
    }
    if (const json* strategy = top.take("strategy")) {
        Section s(*strategy, "strategy");
        std::string name(to_string(c.strategy));
        s.read("name", name);
        c.strategy = strategy_from_string(name);
        s.read("periodic_interval", c.params.periodic_interval);
        s.read("distance_threshold", c.params.distance_threshold);
        s.read("speed_interval_max", c.params.speed_interval_max);
        s.read("speed_interval_min", c.params.speed_interval_min);
        s.read("speed_low", c.params.speed_low);
        s.read("speed_high", c.params.speed_high);
        s.read("acceptable_error", c.params.acceptable_error);
        s.read("timeout_factor", c.params.timeout_factor);
        s.read_count("beacon_size", c.beacon_size);
        s.finish();
    }
    if (const json* perturbations = top.take("perturbations")) {
        Section s(*perturbations, "perturbations");
        s.read("localization_sigma", c.localization_sigma);
        s.finish();
    }
    if (const json* timing = top.take("timing")) {
        Section s(*timing, "timing");
        s.read("duration", c.duration);
        s.read("tick_interval", c.tick_interval);
        s.read("metrics_sample_interval", c.metrics_sample_interval);
        s.finish();
    }
    top.read_count("seed", c.seed);
    top.finish();

    // Explicit flows define the flow count unless it was given too.
    if (!c.flows.empty() && !(root.contains("traffic") && root["traffic"].contains("flow_count"))) {
        c.flow_count = static_cast<std::uint32_t>(c.flows.size());
    }
    if (!c.placement.empty() && !(root.contains("nodes") && root["nodes"].contains("count"))) {
        c.node_count = static_cast<std::uint32_t>(c.placement.size());
    }
    validate(c);
    return c;
}

}  // namespace

void validate(const ScenarioConfig& c)
{
    require(finite_positive(c.area_a), "area.a", "must be > 0");
    require(finite_positive(c.area_b), "area.b", "must be > 0");
    require(c.node_count > 0, "nodes.count", "must be > 0");
    require(c.placement.empty() || c.placement.size() == c.node_count, "nodes.placement",
            "must list exactly nodes.count entries");
    for (const NodeSpec& node : c.placement) {
        require(c.area().contains(node.position), "nodes.placement", "position outside the area");
        for (const ScriptedLeg& leg : node.script) {
            require(c.area().contains(leg.target), "nodes.placement", "script target outside the area");
            require(finite_positive(leg.speed), "nodes.placement", "script speed must be > 0");
            require(finite_nonnegative(leg.pause), "nodes.placement", "script pause must be >= 0");
        }
    }

    if (c.mobility == MobilityModel::RandomWaypoint) {
        require(finite_positive(c.min_speed), "mobility.min_speed", "must be > 0");
        require(std::isfinite(c.max_speed) && c.max_speed >= c.min_speed, "mobility.max_speed",
                "must be >= mobility.min_speed");
    } else {
        require(finite_nonnegative(c.min_speed), "mobility.min_speed", "must be >= 0");
        require(finite_nonnegative(c.max_speed), "mobility.max_speed", "must be >= 0");
    }
    require(finite_nonnegative(c.pause_time), "mobility.pause_time", "must be >= 0");

    require(finite_positive(c.radio_range), "radio.range", "must be > 0");
    require(c.loss_probability >= 0.0 && c.loss_probability <= 1.0, "radio.loss_probability", "must be in [0, 1]");
    require(c.retry_limit >= 1, "radio.retry_limit", "must be >= 1");
    require(finite_positive(c.p2p_rate_bps), "radio.p2p_rate_bps", "must be > 0");
    require(finite_positive(c.broadcast_rate_bps), "radio.broadcast_rate_bps", "must be > 0");
    require(finite_nonnegative(c.processing_delay), "radio.processing_delay", "must be >= 0");

    require(finite_nonnegative(c.packet_rate), "traffic.packet_rate", "must be >= 0");
    require(finite_nonnegative(c.traffic_start), "traffic.start", "must be >= 0");
    require(c.max_hops >= 1, "traffic.max_hops", "must be >= 1");
    const std::uint64_t pairs = std::uint64_t{c.node_count} * (c.node_count - 1);
    require(c.flow_count <= pairs, "traffic.flow_count", "exceeds the number of distinct node pairs");
    require(c.flows.empty() || c.flows.size() == c.flow_count, "traffic.flows",
            "must list exactly traffic.flow_count entries");
    for (const FlowSpec& flow : c.flows) {
        require(flow.source < c.node_count && flow.destination < c.node_count, "traffic.flows", "unknown node id");
        require(flow.source != flow.destination, "traffic.flows", "source equals destination");
        require(!flow.start || finite_nonnegative(*flow.start), "traffic.flows", "start must be >= 0");
        require(!flow.stop || !flow.start || *flow.stop >= *flow.start, "traffic.flows", "stop precedes start");
    }

    const StrategyParams& p = c.params;
    require(finite_positive(p.periodic_interval), "strategy.periodic_interval", "must be > 0");
    require(finite_positive(p.distance_threshold), "strategy.distance_threshold", "must be > 0");
    require(finite_positive(p.speed_interval_min), "strategy.speed_interval_min", "must be > 0");
    require(std::isfinite(p.speed_interval_max) && p.speed_interval_max >= p.speed_interval_min,
            "strategy.speed_interval_max", "must be >= strategy.speed_interval_min");
    require(finite_nonnegative(p.speed_low), "strategy.speed_low", "must be >= 0");
    require(!p.speed_high || (std::isfinite(*p.speed_high) && *p.speed_high >= p.speed_low), "strategy.speed_high",
            "must be >= strategy.speed_low");
    require(!p.acceptable_error || finite_positive(*p.acceptable_error), "strategy.acceptable_error", "must be > 0");
    require(finite_positive(p.timeout_factor), "strategy.timeout_factor", "must be > 0");

    require(finite_nonnegative(c.localization_sigma), "perturbations.localization_sigma", "must be >= 0");

    require(finite_positive(c.duration), "timing.duration", "must be > 0");
    require(finite_positive(c.tick_interval), "timing.tick_interval", "must be > 0");
    require(finite_positive(c.metrics_sample_interval), "timing.metrics_sample_interval", "must be > 0");
}

ScenarioConfig parse_scenario(std::string_view json_text)
{
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
    }
    return from_json(root);
}

ScenarioConfig load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str());
}

std::string dump_scenario(const ScenarioConfig& config, int indent)
{
    return to_json(config).dump(indent);
}

ScenarioConfig with_override(const ScenarioConfig& config, std::string_view dotted_key, double value)
{
    json root = to_json(config);
    json* cursor = &root;
    std::string_view rest = dotted_key;
    while (true) {
        const auto dot = rest.find('.');
        const std::string key(rest.substr(0, dot));
        if (!cursor->is_object() || !cursor->contains(key)) {
            throw ConfigError(std::string(dotted_key), "no such parameter");
        }
        cursor = &(*cursor)[key];
        if (dot == std::string_view::npos) break;
        rest = rest.substr(dot + 1);
    }
    if (cursor->is_object() || cursor->is_array() || cursor->is_string()) {
        throw ConfigError(std::string(dotted_key), "not a numeric parameter");
    }
    if (cursor->is_number_integer() || cursor->is_number_unsigned()) {
        if (value != std::floor(value) || value < 0) {
            throw ConfigError(std::string(dotted_key), "expects a nonnegative integer");
        }
        *cursor = static_cast<std::uint64_t>(value);
    } else {
        *cursor = value;
    }
    return from_json(root);
}

}  // namespace apu
