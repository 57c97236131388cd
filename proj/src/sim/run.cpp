#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <stdexcept>
#include <thread>

#include "internal.hpp"

namespace ldfec::sim {

using codec::Variant;

std::string to_string(Mode m) {
    return m == Mode::open_loop ? "open" : "closed";
}

Mode mode_from_string(const std::string& name) {
    if (name == "open" || name == "open_loop") {
        return Mode::open_loop;
    }
    if (name == "closed" || name == "closed_loop") {
        return Mode::closed_loop;
    }
    throw std::invalid_argument("unknown mode '" + name + "'");
}

void Scenario::validate() const {
    code.validate();
    if (slots < 0) {
        throw std::invalid_argument("stream length must be nonnegative");
    }
    if (mode == Mode::closed_loop && feedback_delay < 1) {
        throw std::invalid_argument("closed-loop operation requires feedback_delay >= 1");
    }
    if (field_bits < 1 || field_bits > 16) {
        throw std::invalid_argument("field_bits must lie in [1, 16]");
    }
    if (payload_symbols > 0 && ideal_recovery) {
        throw std::invalid_argument("payloads require real field decoding (ideal_recovery = false)");
    }
    if (tail_packets < 0) {
        throw std::invalid_argument("tail_packets must be nonnegative");
    }
    if (code.variant == Variant::block && tail_packets > 0) {
        throw std::invalid_argument("tail packets apply to the stream and group codes only");
    }
    if (seeds.empty()) {
        throw std::invalid_argument("at least one seed is required");
    }
    if (replications < 1) {
        throw std::invalid_argument("replications must be at least 1");
    }
}

std::int64_t Scenario::padded_slots() const {
    const std::int64_t i = code.interval();
    return (slots + i - 1) / i * i;
}

int Scenario::replication_count() const {
    return std::max(replications, static_cast<int>(seeds.size()));
}

std::uint64_t Scenario::seed_for(int r) const {
    if (r < static_cast<int>(seeds.size())) {
        return seeds[static_cast<std::size_t>(r)];
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seeds.back()), static_cast<std::uint32_t>(seeds.back() >> 32),
                      static_cast<std::uint32_t>(r), 0x72657073u};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

bool Scenario::divergent() const {
    if (mode != Mode::open_loop || code.variant == Variant::block) {
        return false;
    }
    return static_cast<long double>(code.interval()) * channel::loss_rate(channel) >= code.coded_per_interval();
}

namespace {

SimReport run_stream(const Scenario& sc, std::uint64_t seed) {
    const gf::Field* field = sc.ideal_recovery ? nullptr : &gf::Field::get(sc.field_bits);
    codec::InfoSource source;
    if (field != nullptr && sc.payload_symbols > 0) {
        source = codec::random_source(*field, sc.payload_symbols, seed);
    }
    const bool sliding = sc.mode == Mode::closed_loop || !sc.full_history;
    codec::Encoder enc(sc.code, field, sliding ? codec::WindowPolicy::sliding : codec::WindowPolicy::full_history,
                       seed, source);
    codec::StreamDecoder dec(sc.code, field, sc.payload_symbols);
    channel::ErasureProcess erasures(sc.channel, seed);
    const int interval = sc.code.interval();
    const int ipi = sc.code.info_per_interval();
    const std::int64_t n = sc.padded_slots();
    std::deque<std::int64_t> prefix_history;  // delivered prefix after each of the last slots

    SimReport r;
    auto consume = [&](const std::vector<codec::Delivery>& events) {
        for (const auto& e : events) {
            detail::record_delay(r, e.slot - detail::layout_send_slot(e.index, interval, ipi));
        }
    };
    for (std::int64_t slot = 1; slot <= n; ++slot) {
        if (sc.mode == Mode::closed_loop) {
            const auto rtt = static_cast<std::size_t>(sc.feedback_delay);
            if (prefix_history.size() >= rtt) {
                enc.acknowledge(prefix_history[prefix_history.size() - rtt]);
            }
        } else if (sliding) {
            enc.acknowledge(dec.delivered_prefix());
        }
        const codec::Packet pkt = enc.next();
        const bool erased = erasures.next();
        consume(dec.ingest(slot, erased ? nullptr : &pkt));
        if (sc.mode == Mode::closed_loop) {
            prefix_history.push_back(dec.delivered_prefix());
            if (prefix_history.size() > static_cast<std::size_t>(sc.feedback_delay) + 1) {
                prefix_history.pop_front();
            }
        }
    }
    std::int64_t last = n;
    for (int t = 0; t < sc.tail_packets; ++t) {
        if (sc.mode == Mode::open_loop && sliding) {
            enc.acknowledge(dec.delivered_prefix());
        }
        const codec::Packet pkt = enc.tail_packet();
        const bool erased = erasures.next();
        consume(dec.ingest_tail(++last, erased ? nullptr : &pkt));
    }
    for (const auto& b : dec.busy_log()) {
        detail::record_busy(r, b.length);
    }
    r.slots = last;
    r.regular_slots = n;
    r.info_sent = enc.info_sent();
    r.undelivered = r.info_sent - r.delivered;
    r.intervals = n / interval;
    r.idle_intervals = dec.idle_intervals();
    r.open_busy_intervals = dec.open_busy_intervals();
    r.dependence_events = dec.dependence_events();
    r.coefficient_ops = dec.ops().coefficient_ops;
    r.payload_ops = dec.ops().payload_ops;
    return r;
}

struct BlockSample {
    std::int64_t first_block = 1;
    std::vector<int> dof;  // blocks first_block, first_block + 1, ...
};

SimReport run_block(const Scenario& sc, std::uint64_t seed) {
    const gf::Field* field = sc.ideal_recovery ? nullptr : &gf::Field::get(sc.field_bits);
    codec::InfoSource source;
    if (field != nullptr && sc.payload_symbols > 0) {
        source = codec::random_source(*field, sc.payload_symbols, seed);
    }
    const int n_len = sc.code.n;
    const int k = sc.code.k;
    codec::BlockEncoder enc(sc.code, field, seed, source);
    codec::BlockDecoder dec(sc.code, field, sc.payload_symbols);
    channel::ErasureProcess erasures(sc.channel, seed);
    const std::int64_t n = sc.padded_slots();
    std::vector<std::int64_t> send_slot;
    std::deque<BlockSample> samples;
    std::int64_t regular = 0;

    SimReport r;
    auto consume = [&](const std::vector<codec::Delivery>& events) {
        for (const auto& e : events) {
            detail::record_delay(r, e.slot - send_slot[static_cast<std::size_t>(e.index - 1)]);
        }
    };
    for (std::int64_t slot = 1; slot <= n; ++slot) {
        if (sc.mode == Mode::closed_loop && samples.size() >= static_cast<std::size_t>(sc.feedback_delay)) {
            const std::int64_t sampled_at = slot - sc.feedback_delay;
            const BlockSample& s = samples[samples.size() - static_cast<std::size_t>(sc.feedback_delay)];
            for (std::size_t i = 0; i < s.dof.size(); ++i) {
                const std::int64_t b = s.first_block + static_cast<std::int64_t>(i);
                const bool regular_done = b * n_len <= regular;
                if (regular_done && s.dof[i] < k && enc.queued_for(b) == 0 &&
                    enc.last_send_slot(b) <= sampled_at) {
                    enc.schedule_retransmission(b, k - s.dof[i]);
                }
            }
            enc.release_before(s.first_block);
        }
        const bool retransmission = enc.pending_retransmissions() > 0;
        const codec::Packet pkt = enc.next();
        if (!retransmission) {
            ++regular;
        }
        if (pkt.kind == codec::PacketKind::info) {
            send_slot.push_back(slot);
        }
        const bool erased = erasures.next();
        consume(dec.ingest(slot, erased ? nullptr : &pkt));
        if (sc.mode == Mode::open_loop && regular % n_len == 0) {
            consume(dec.expire(regular / n_len, slot));
        }
        if (sc.mode == Mode::closed_loop) {
            BlockSample s;
            s.first_block = dec.delivered_prefix() / k + 1;
            for (std::int64_t b = s.first_block; b <= enc.blocks_started(); ++b) {
                s.dof.push_back(dec.degrees_of_freedom(b));
            }
            samples.push_back(std::move(s));
            if (samples.size() > static_cast<std::size_t>(sc.feedback_delay) + 1) {
                samples.pop_front();
            }
        }
    }
    r.slots = n;
    r.regular_slots = n;
    r.info_sent = static_cast<std::int64_t>(send_slot.size());
    r.lost = dec.lost();
    r.undelivered = r.info_sent - r.delivered - r.lost;
    r.intervals = regular / n_len;
    r.dependence_events = dec.dependence_events();
    r.coefficient_ops = dec.ops().coefficient_ops;
    r.payload_ops = dec.ops().payload_ops;
    return r;
}

}  // namespace

SimReport run_single(const Scenario& sc, std::uint64_t seed) {
    sc.validate();
    SimReport r;
    if (sc.code.variant == Variant::block) {
        r = run_block(sc, seed);
    } else if (detail::fast_path_applies(sc)) {
        r = detail::run_fast_ideal(sc, seed);
    } else {
        r = run_stream(sc, seed);
    }
    r.code = codec::to_string(sc.code.variant);
    r.rate = sc.code.rate();
    r.loss_rate = channel::loss_rate(sc.channel);
    r.divergent = sc.divergent();
    r.padded = sc.padded_slots() != sc.slots;
    SeedResult s;
    s.seed = seed;
    s.slots = r.regular_slots;
    s.info_sent = r.info_sent;
    s.delivered = r.delivered;
    s.delay_sum = r.delay_sum;
    s.coefficient_ops = r.coefficient_ops;
    r.per_seed = {s};
    return r;
}

unsigned worker_count() {
    if (const char* env = std::getenv("LDFEC_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

template <typename Fn>
void parallel_for(int count, Fn&& fn) {
    const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max(count, 1)));
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                fn(i);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

}  // namespace

SimReport run(const Scenario& sc) {
    sc.validate();
    const int reps = sc.replication_count();
    std::vector<SimReport> parts(static_cast<std::size_t>(reps));
    parallel_for(reps, [&](int i) { parts[static_cast<std::size_t>(i)] = run_single(sc, sc.seed_for(i)); });
    SimReport total;
    for (const auto& p : parts) {
        total.merge(p);
    }
    return total;
}

std::vector<double> measure_gt(const Scenario& sc) {
    sc.validate();
    if (sc.code.variant == Variant::block || sc.mode != Mode::open_loop || sc.tail_packets != 0) {
        throw std::invalid_argument("good-throughput measurement needs an open-loop stream or group code without tail packets");
    }
    const int reps = sc.replication_count();
    std::vector<double> out(static_cast<std::size_t>(reps));
    parallel_for(reps, [&](int i) {
        const SimReport r = run_single(sc, sc.seed_for(i));
        out[static_cast<std::size_t>(i)] = r.good_throughput();
    });
    return out;
}

SweepAxis axis_from_string(const std::string& name) {
    if (name == "rate") {
        return SweepAxis::rate;
    }
    if (name == "epsilon" || name == "eps") {
        return SweepAxis::epsilon;
    }
    if (name == "c") {
        return SweepAxis::c;
    }
    if (name == "block_size" || name == "k") {
        return SweepAxis::block_size;
    }
    throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

std::string to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::rate:
            return "rate";
        case SweepAxis::epsilon:
            return "epsilon";
        case SweepAxis::c:
            return "c";
        case SweepAxis::block_size:
            return "block_size";
    }
    return "unknown";
}

namespace {

int stream_l(const codec::CodeParams& p) {
    switch (p.variant) {
        case Variant::stream:
            return p.l;
        case Variant::group:
            return p.lg / p.c;
        case Variant::block:
            return p.n / (p.n - p.k);
    }
    return 0;
}

int l_for_rate(double rate) {
    if (!(rate > 0.0 && rate < 1.0)) {
        throw std::invalid_argument("rate must lie in (0, 1)");
    }
    const double l = 1.0 / (1.0 - rate);
    const long rounded = std::lround(l);
    if (rounded < 2 || std::fabs(l - static_cast<double>(rounded)) > 1e-6) {
        throw std::invalid_argument("rate must equal (l-1)/l for an integer l >= 2");
    }
    return static_cast<int>(rounded);
}

Scenario apply_axis(const Scenario& base, SweepAxis axis, double value) {
    Scenario s = base;
    switch (axis) {
        case SweepAxis::rate: {
            const int l = l_for_rate(value);
            if (base.code.variant == Variant::stream) {
                s.code = codec::CodeParams::stream(l);
            } else if (base.code.variant == Variant::group) {
                s.code = codec::CodeParams::group(base.code.c * l, base.code.c);
            } else {
                const int m = base.code.n - base.code.k;
                s.code = codec::CodeParams::block(l * m, (l - 1) * m);
            }
            break;
        }
        case SweepAxis::epsilon:
            if (std::holds_alternative<channel::IidChannel>(base.channel)) {
                s.channel = channel::IidChannel(value);
            } else {
                const auto& ge = std::get<channel::GilbertElliottChannel>(base.channel);
                s.channel = channel::GilbertElliottChannel::from_burst(value, ge.expected_burst);
            }
            break;
        case SweepAxis::c: {
            const int c = static_cast<int>(std::lround(value));
            const int l = stream_l(base.code);
            s.code = codec::CodeParams::group(c * l, c);
            break;
        }
        case SweepAxis::block_size: {
            if (base.code.variant != Variant::block) {
                throw std::invalid_argument("block_size sweeps need a block code template");
            }
            const auto k = static_cast<long>(std::lround(value));
            const long num = k * base.code.n;
            if (num % base.code.k != 0) {
                throw std::invalid_argument("block size does not keep the template rate");
            }
            s.code = codec::CodeParams::block(static_cast<int>(num / base.code.k), static_cast<int>(k));
            break;
        }
    }
    return s;
}

}  // namespace

std::vector<SweepPoint> sweep(const Scenario& base, SweepAxis axis, const std::vector<double>& values) {
    std::vector<SweepPoint> out;
    for (double v : values) {
        SweepPoint p;
        p.value = v;
        p.scenario = apply_axis(base, axis, v);
        p.report = run(p.scenario);
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace ldfec::sim
