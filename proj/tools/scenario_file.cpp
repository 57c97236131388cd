#include "scenario_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ldfec::cli {

using nlohmann::json;

namespace {

void only_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) {
        throw ScenarioError(path, "expected an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            throw ScenarioError(path + "." + key, "unknown key");
        }
    }
}

template <typename T>
T read(const json& obj, const std::string& key, const std::string& path, T fallback) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    const std::string where = path + "." + key;
    if constexpr (std::is_same_v<T, bool>) {
        if (!it->is_boolean()) {
            throw ScenarioError(where, "expected a boolean");
        }
    } else if constexpr (std::is_integral_v<T>) {
        if (!it->is_number_integer()) {
            throw ScenarioError(where, "expected an integer");
        }
        if constexpr (std::is_unsigned_v<T>) {
            if (it->is_number_integer() && !it->is_number_unsigned()) {
                throw ScenarioError(where, "expected a nonnegative integer");
            }
        }
    } else if constexpr (std::is_floating_point_v<T>) {
        if (!it->is_number()) {
            throw ScenarioError(where, "expected a number");
        }
    } else {
        if (!it->is_string()) {
            throw ScenarioError(where, "expected a string");
        }
    }
    return it->get<T>();
}

template <typename T>
std::vector<T> read_list(const json& obj, const std::string& key, const std::string& path, std::vector<T> fallback) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    const std::string where = path + "." + key;
    if (!it->is_array()) {
        throw ScenarioError(where, "expected an array");
    }
    std::vector<T> out;
    for (std::size_t i = 0; i < it->size(); ++i) {
        const json& v = (*it)[i];
        const bool ok = std::is_integral_v<T> ? v.is_number_integer() && (!std::is_unsigned_v<T> || v.is_number_unsigned())
                                              : v.is_number();
        if (!ok) {
            throw ScenarioError(where + "[" + std::to_string(i) + "]",
                                std::is_integral_v<T> ? "expected an integer" : "expected a number");
        }
        out.push_back(v.get<T>());
    }
    return out;
}

codec::CodeParams parse_code(const json& j, const std::string& path) {
    only_keys(j, path, {"variant", "l", "lg", "c", "n", "k"});
    const std::string variant = read<std::string>(j, "variant", path, "stream");
    codec::Variant v;
    try {
        v = codec::variant_from_string(variant);
    } catch (const std::exception& e) {
        throw ScenarioError(path + ".variant", e.what());
    }
    try {
        switch (v) {
            case codec::Variant::stream:
                return codec::CodeParams::stream(read<int>(j, "l", path, 0));
            case codec::Variant::group:
                return codec::CodeParams::group(read<int>(j, "lg", path, 0), read<int>(j, "c", path, 1));
            case codec::Variant::block:
                return codec::CodeParams::block(read<int>(j, "n", path, 0), read<int>(j, "k", path, 0));
        }
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception& e) {
        throw ScenarioError(path, e.what());
    }
    throw ScenarioError(path + ".variant", "unknown variant");
}

channel::ChannelModel parse_channel(const json& j, const std::string& path) {
    only_keys(j, path, {"model", "epsilon", "pi_b", "burst"});
    const std::string model = read<std::string>(j, "model", path, "iid");
    try {
        if (model == "iid") {
            if (j.contains("pi_b") || j.contains("burst")) {
                throw ScenarioError(path + (j.contains("pi_b") ? ".pi_b" : ".burst"), "only valid for gilbert_elliott");
            }
            return channel::IidChannel(read<double>(j, "epsilon", path, 0.0));
        }
        if (model == "gilbert_elliott") {
            if (j.contains("epsilon")) {
                throw ScenarioError(path + ".epsilon", "use pi_b for gilbert_elliott");
            }
            return channel::GilbertElliottChannel::from_burst(read<double>(j, "pi_b", path, 0.0),
                                                              read<double>(j, "burst", path, 1.0));
        }
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception& e) {
        throw ScenarioError(path, e.what());
    }
    throw ScenarioError(path + ".model", "expected \"iid\" or \"gilbert_elliott\"");
}

}  // namespace

ScenarioFile parse_scenario_file(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError("$", std::string("invalid JSON: ") + e.what());
    }
    const std::string path = "$";
    only_keys(root, path,
              {"code", "channel", "slots", "mode", "feedback_delay", "field_bits", "ideal_recovery", "full_history",
               "payload_symbols", "tail_packets", "seeds", "replications", "sweep", "compare", "output"});
    ScenarioFile f;
    auto& sc = f.scenario;
    if (root.contains("code")) {
        sc.code = parse_code(root["code"], "$.code");
    }
    if (root.contains("channel")) {
        sc.channel = parse_channel(root["channel"], "$.channel");
    }
    sc.slots = read<std::int64_t>(root, "slots", path, 0);
    try {
        sc.mode = sim::mode_from_string(read<std::string>(root, "mode", path, "open"));
    } catch (const std::invalid_argument& e) {
        throw ScenarioError("$.mode", e.what());
    }
    sc.feedback_delay = read<int>(root, "feedback_delay", path, 0);
    sc.field_bits = read<unsigned>(root, "field_bits", path, 8);
    sc.ideal_recovery = read<bool>(root, "ideal_recovery", path, true);
    sc.full_history = read<bool>(root, "full_history", path, false);
    sc.payload_symbols = read<std::size_t>(root, "payload_symbols", path, 0);
    sc.tail_packets = read<int>(root, "tail_packets", path, 0);
    sc.seeds = read_list<std::uint64_t>(root, "seeds", path, {1});
    sc.replications = read<int>(root, "replications", path, 1);

    if (root.contains("sweep")) {
        const json& s = root["sweep"];
        only_keys(s, "$.sweep", {"axis", "values"});
        SweepSpec spec;
        try {
            spec.axis = sim::axis_from_string(read<std::string>(s, "axis", "$.sweep", "rate"));
        } catch (const std::invalid_argument& e) {
            throw ScenarioError("$.sweep.axis", e.what());
        }
        spec.values = read_list<double>(s, "values", "$.sweep", {});
        if (spec.values.empty()) {
            throw ScenarioError("$.sweep.values", "at least one value is required");
        }
        f.sweep = spec;
    }
    if (root.contains("compare")) {
        const json& c = root["compare"];
        only_keys(c, "$.compare", {"rates", "block_multipliers", "group_c"});
        CompareSpec spec;
        spec.rates = read_list<double>(c, "rates", "$.compare", {});
        spec.block_multipliers = read_list<int>(c, "block_multipliers", "$.compare", {1});
        spec.group_c = read_list<int>(c, "group_c", "$.compare", {});
        if (spec.rates.empty()) {
            throw ScenarioError("$.compare.rates", "at least one rate is required");
        }
        f.compare = spec;
    }
    if (root.contains("output")) {
        const json& o = root["output"];
        only_keys(o, "$.output", {"csv", "json", "slot_ms"});
        f.output.csv = read<std::string>(o, "csv", "$.output", "");
        f.output.json = read<std::string>(o, "json", "$.output", "");
        if (o.contains("slot_ms")) {
            f.output.slot_ms = read<double>(o, "slot_ms", "$.output", 0.0);
        }
    }
    try {
        sc.validate();
    } catch (const std::exception& e) {
        throw ScenarioError("$", e.what());
    }
    if (sc.slots <= 0) {
        throw ScenarioError("$.slots", "must be positive");
    }
    return f;
}

ScenarioFile load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read scenario file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_file(buf.str());
}

}  // namespace ldfec::cli
