#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "ldfec/sim.hpp"

namespace ldfec::sim {

using nlohmann::json;

double SimReport::mean_delay() const {
    return delivered ? static_cast<double>(delay_sum) / static_cast<double>(delivered) : 0.0;
}

double SimReport::mean_delay_per_slot() const {
    return regular_slots ? static_cast<double>(delay_sum) / static_cast<double>(regular_slots) : 0.0;
}

double SimReport::delay_per_slot_stderr() const {
    const std::size_t n = per_seed.size();
    if (n < 2) {
        return 0.0;
    }
    double mean = 0.0;
    for (const auto& s : per_seed) {
        mean += s.delay_per_slot();
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& s : per_seed) {
        const double d = s.delay_per_slot() - mean;
        var += d * d;
    }
    var /= static_cast<double>(n - 1);
    return std::sqrt(var / static_cast<double>(n));
}

double SimReport::good_throughput() const {
    return slots ? static_cast<double>(delivered) / static_cast<double>(slots) : 0.0;
}

double SimReport::packet_error_rate() const {
    return info_sent ? static_cast<double>(lost + undelivered) / static_cast<double>(info_sent) : 0.0;
}

double SimReport::ops_per_info_packet() const {
    return info_sent ? static_cast<double>(coefficient_ops) / static_cast<double>(info_sent) : 0.0;
}

std::uint64_t SimReport::busy_periods() const {
    std::uint64_t n = 0;
    for (std::size_t s = 1; s < busy_histogram.size(); ++s) {
        n += busy_histogram[s];
    }
    return n;
}

std::uint64_t SimReport::busy_interval_total() const {
    std::uint64_t n = 0;
    for (std::size_t s = 1; s < busy_histogram.size(); ++s) {
        n += busy_histogram[s] * s;
    }
    return n;
}

namespace {

void add_histogram(std::vector<std::uint64_t>& into, const std::vector<std::uint64_t>& from) {
    if (into.size() < from.size()) {
        into.resize(from.size(), 0);
    }
    for (std::size_t i = 0; i < from.size(); ++i) {
        into[i] += from[i];
    }
}

}  // namespace

void SimReport::merge(const SimReport& o) {
    if (code.empty()) {
        code = o.code;
        rate = o.rate;
        loss_rate = o.loss_rate;
    }
    divergent = divergent || o.divergent;
    padded = padded || o.padded;
    slots += o.slots;
    regular_slots += o.regular_slots;
    info_sent += o.info_sent;
    delivered += o.delivered;
    lost += o.lost;
    undelivered += o.undelivered;
    delay_sum += o.delay_sum;
    add_histogram(delay_histogram, o.delay_histogram);
    add_histogram(busy_histogram, o.busy_histogram);
    idle_intervals += o.idle_intervals;
    open_busy_intervals += o.open_busy_intervals;
    intervals += o.intervals;
    dependence_events += o.dependence_events;
    coefficient_ops += o.coefficient_ops;
    payload_ops += o.payload_ops;
    per_seed.insert(per_seed.end(), o.per_seed.begin(), o.per_seed.end());
}

std::string SimReport::to_json() const {
    json j;
    j["code"] = code;
    j["rate"] = rate;
    j["loss_rate"] = loss_rate;
    j["divergent"] = divergent;
    j["padded"] = padded;
    j["slots"] = slots;
    j["regular_slots"] = regular_slots;
    j["info_sent"] = info_sent;
    j["delivered"] = delivered;
    j["lost"] = lost;
    j["undelivered"] = undelivered;
    j["delay_sum"] = delay_sum;
    j["delay_histogram"] = delay_histogram;
    j["busy_histogram"] = busy_histogram;
    j["idle_intervals"] = idle_intervals;
    j["open_busy_intervals"] = open_busy_intervals;
    j["intervals"] = intervals;
    j["dependence_events"] = dependence_events;
    j["coefficient_ops"] = coefficient_ops;
    j["payload_ops"] = payload_ops;
    json seeds = json::array();
    for (const auto& s : per_seed) {
        seeds.push_back({{"seed", s.seed},
                         {"slots", s.slots},
                         {"info_sent", s.info_sent},
                         {"delivered", s.delivered},
                         {"delay_sum", s.delay_sum},
                         {"coefficient_ops", s.coefficient_ops}});
    }
    j["per_seed"] = seeds;
    j["summary"] = {{"mean_delay", mean_delay()},
                    {"mean_delay_per_slot", mean_delay_per_slot()},
                    {"good_throughput", good_throughput()},
                    {"packet_error_rate", packet_error_rate()},
                    {"ops_per_info_packet", ops_per_info_packet()},
                    {"busy_periods", busy_periods()}};
    return j.dump(2);
}

SimReport SimReport::from_json(const std::string& text) {
    const json j = json::parse(text);
    SimReport r;
    r.code = j.at("code").get<std::string>();
    r.rate = j.at("rate").get<double>();
    r.loss_rate = j.at("loss_rate").get<double>();
    r.divergent = j.at("divergent").get<bool>();
    r.padded = j.at("padded").get<bool>();
    r.slots = j.at("slots").get<std::int64_t>();
    r.regular_slots = j.at("regular_slots").get<std::int64_t>();
    r.info_sent = j.at("info_sent").get<std::int64_t>();
    r.delivered = j.at("delivered").get<std::int64_t>();
    r.lost = j.at("lost").get<std::int64_t>();
    r.undelivered = j.at("undelivered").get<std::int64_t>();
    r.delay_sum = j.at("delay_sum").get<std::int64_t>();
    r.delay_histogram = j.at("delay_histogram").get<std::vector<std::uint64_t>>();
    r.busy_histogram = j.at("busy_histogram").get<std::vector<std::uint64_t>>();
    r.idle_intervals = j.at("idle_intervals").get<std::int64_t>();
    r.open_busy_intervals = j.at("open_busy_intervals").get<std::int64_t>();
    r.intervals = j.at("intervals").get<std::int64_t>();
    r.dependence_events = j.at("dependence_events").get<std::uint64_t>();
    r.coefficient_ops = j.at("coefficient_ops").get<std::uint64_t>();
    r.payload_ops = j.at("payload_ops").get<std::uint64_t>();
    for (const auto& s : j.at("per_seed")) {
        SeedResult sr;
        sr.seed = s.at("seed").get<std::uint64_t>();
        sr.slots = s.at("slots").get<std::int64_t>();
        sr.info_sent = s.at("info_sent").get<std::int64_t>();
        sr.delivered = s.at("delivered").get<std::int64_t>();
        sr.delay_sum = s.at("delay_sum").get<std::int64_t>();
        sr.coefficient_ops = s.at("coefficient_ops").get<std::uint64_t>();
        r.per_seed.push_back(sr);
    }
    return r;
}

}  // namespace ldfec::sim
