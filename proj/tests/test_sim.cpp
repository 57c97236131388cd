#include <cmath>
#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "ldfec/sim.hpp"

using namespace ldfec;
using namespace ldfec::sim;

namespace {

Scenario base(double eps, int l, std::int64_t slots) {
    Scenario sc;
    sc.code = codec::CodeParams::stream(l);
    sc.channel = channel::IidChannel(eps);
    sc.slots = slots;
    return sc;
}

void check_renewal(const SimReport& r) {
    std::uint64_t busy = 0;
    for (std::size_t s = 0; s < r.busy_histogram.size(); ++s) {
        busy += s * r.busy_histogram[s];
    }
    CHECK(static_cast<std::int64_t>(busy) + r.idle_intervals + r.open_busy_intervals == r.intervals);
    CHECK(r.busy_interval_total() == busy);
}

}  // namespace

TEST_CASE("a lossless channel delivers everything immediately") {
    for (int l : {2, 5, 9}) {
        auto sc = base(0.0, l, 9000);
        for (bool ideal : {true, false}) {
            sc.ideal_recovery = ideal;
            const auto r = run(sc);
            CHECK(r.good_throughput() == doctest::Approx(static_cast<double>(l - 1) / l));
            CHECK(r.mean_delay() == 0.0);
            CHECK(r.busy_periods() == 0);
            CHECK(r.undelivered == 0);
        }
    }
}

TEST_CASE("runs are reproducible") {
    auto sc = base(0.1, 5, 50000);
    sc.seeds = {3, 4};
    const auto a = run(sc);
    const auto b = run(sc);
    CHECK(a == b);
    CHECK(a.to_json() == b.to_json());
    sc.seeds = {5, 4};
    CHECK_FALSE(run(sc) == a);
}

TEST_CASE("reports survive a JSON round trip") {
    auto sc = base(0.1, 4, 20000);
    sc.ideal_recovery = false;
    sc.seeds = {1, 2, 3};
    const auto r = run(sc);
    CHECK(SimReport::from_json(r.to_json()) == r);
    CHECK(r.per_seed.size() == 3);
}

TEST_CASE("busy, idle and open intervals partition the stream") {
    for (const auto& code : {codec::CodeParams::stream(5), codec::CodeParams::group(10, 2)}) {
        auto sc = base(0.1, 5, 100003);
        sc.code = code;
        check_renewal(run(sc));
        sc.ideal_recovery = false;
        check_renewal(run(sc));
    }
}

TEST_CASE("the counting path matches the packet-level idealized decoder") {
    auto open = base(0.15, 5, 200000);
    open.code = codec::CodeParams::group(10, 2);
    open.seeds = {9};
    auto closed = open;
    closed.mode = Mode::closed_loop;
    closed.feedback_delay = 1;
    const auto a = run(open);
    const auto b = run(closed);
    CHECK(a.delivered == b.delivered);
    CHECK(a.delay_sum == b.delay_sum);
    CHECK(a.delay_histogram == b.delay_histogram);
    CHECK(a.busy_histogram == b.busy_histogram);
    CHECK(a.idle_intervals == b.idle_intervals);
    CHECK(a.open_busy_intervals == b.open_busy_intervals);
}

TEST_CASE("real-field decoding over a large field tracks the idealized decoder") {
    auto sc = base(0.1, 5, 100000);
    const auto ideal = run(sc);
    sc.ideal_recovery = false;
    sc.field_bits = 16;
    const auto real = run(sc);
    CHECK(real.dependence_events <= 2);
    CHECK(std::llabs(real.delivered - ideal.delivered) <= 200);
    CHECK(real.coefficient_ops > 0);
    sc.field_bits = 8;
    sc.payload_symbols = 16;
    const auto with_payload = run(sc);
    CHECK(with_payload.payload_ops > 0);
}

TEST_CASE("tail packets flush the last busy period") {
    auto sc = base(0.1, 5, 10000);
    sc.seeds = {2};
    const auto plain = run(sc);
    sc.tail_packets = 40;
    const auto flushed = run(sc);
    CHECK(flushed.undelivered <= plain.undelivered);
    CHECK(flushed.slots == plain.slots + 40);
    CHECK(flushed.regular_slots == plain.regular_slots);
}

TEST_CASE("closed loop with feedback delay") {
    auto sc = base(0.1, 5, 100000);
    sc.mode = Mode::closed_loop;
    sc.feedback_delay = 20;
    sc.ideal_recovery = false;
    const auto r = run(sc);
    CHECK(r.delivered > 70000);
    CHECK(r.good_throughput() <= 0.8);
    CHECK_FALSE(r.divergent);
}

TEST_CASE("block code in open and closed loop") {
    auto sc = base(0.1, 5, 100000);
    sc.code = codec::CodeParams::block(10, 8);
    sc.ideal_recovery = false;
    const auto open = run(sc);
    CHECK(open.lost > 0);
    CHECK(open.delivered + open.lost + open.undelivered == open.info_sent);
    sc.mode = Mode::closed_loop;
    sc.feedback_delay = 10;
    const auto closed = run(sc);
    CHECK(closed.lost == 0);
    CHECK(closed.slots >= closed.regular_slots);
    CHECK(closed.packet_error_rate() < open.packet_error_rate());
}

TEST_CASE("padding and divergence flags") {
    auto sc = base(0.25, 4, 1001);
    CHECK(sc.padded_slots() == 1004);
    CHECK(sc.divergent());
    const auto r = run(sc);
    CHECK(r.padded);
    CHECK(r.divergent);
    sc.channel = channel::IidChannel(0.1);
    CHECK_FALSE(sc.divergent());
}

TEST_CASE("replications beyond the seed list get derived seeds") {
    auto sc = base(0.1, 5, 1000);
    sc.seeds = {7};
    sc.replications = 3;
    CHECK(sc.replication_count() == 3);
    CHECK(sc.seed_for(0) == 7);
    CHECK(sc.seed_for(1) != sc.seed_for(2));
    CHECK(measure_gt(sc).size() == 3);
}

TEST_CASE("sweeps rebuild the code along each axis") {
    auto sc = base(0.1, 5, 20000);
    const auto rate = sweep(sc, SweepAxis::rate, {0.5, 0.75, 0.8});
    REQUIRE(rate.size() == 3);
    CHECK(rate[0].scenario.code.l == 2);
    CHECK(rate[2].scenario.code.l == 5);
    CHECK_THROWS_AS(sweep(sc, SweepAxis::rate, {0.7}), std::invalid_argument);
    const auto eps = sweep(sc, SweepAxis::epsilon, {0.05, 0.1});
    CHECK(eps[0].report.mean_delay() < eps[1].report.mean_delay());
    const auto c = sweep(sc, SweepAxis::c, {1, 3});
    CHECK(c[1].scenario.code == codec::CodeParams::group(15, 3));
    auto blk = sc;
    blk.code = codec::CodeParams::block(10, 8);
    const auto k = sweep(blk, SweepAxis::block_size, {4, 16});
    CHECK(k[1].scenario.code == codec::CodeParams::block(20, 16));
    CHECK_THROWS_AS(sweep(blk, SweepAxis::block_size, {3}), std::invalid_argument);
    CHECK(axis_from_string("eps") == SweepAxis::epsilon);
    CHECK_THROWS(axis_from_string("slots"));
}

TEST_CASE("invalid scenarios are rejected") {
    auto sc = base(0.1, 5, 1000);
    sc.mode = Mode::closed_loop;
    CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
    sc = base(0.1, 5, 1000);
    sc.payload_symbols = 4;
    CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
    sc = base(0.1, 5, 1000);
    sc.field_bits = 17;
    CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
    sc = base(0.1, 5, 1000);
    sc.seeds.clear();
    CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
    sc = base(0.1, 5, 1000);
    sc.code = codec::CodeParams::block(10, 8);
    sc.tail_packets = 2;
    CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
    CHECK(mode_from_string("closed_loop") == Mode::closed_loop);
    CHECK(to_string(Mode::open_loop) == "open");
}
