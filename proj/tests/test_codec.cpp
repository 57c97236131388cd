#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "ldfec/channel.hpp"
#include "ldfec/codec.hpp"

using namespace ldfec;
using namespace ldfec::codec;

namespace {

std::vector<std::vector<Symbol>> random_info(std::size_t count, std::size_t symbols, std::uint64_t seed) {
    const auto source = random_source(gf::Field::get(8), symbols, seed);
    std::vector<std::vector<Symbol>> out;
    for (std::size_t j = 1; j <= count; ++j) {
        out.push_back(source(static_cast<std::int64_t>(j)));
    }
    return out;
}

std::vector<std::int64_t> info_send_slots(const std::vector<Packet>& packets) {
    std::vector<std::int64_t> out;
    for (const auto& p : packets) {
        if (p.kind == PacketKind::info) {
            out.push_back(p.slot);
        }
    }
    return out;
}

template <typename Decoder>
std::vector<Delivery> run_decoder(Decoder& dec, const std::vector<Packet>& packets, const std::vector<bool>& erased) {
    std::vector<Delivery> all;
    for (std::size_t i = 0; i < packets.size(); ++i) {
        const Packet* p = erased[i] ? nullptr : &packets[i];
        auto d = dec.ingest(static_cast<std::int64_t>(i + 1), p);
        all.insert(all.end(), d.begin(), d.end());
    }
    return all;
}

std::vector<bool> erasures_at(std::size_t slots, std::initializer_list<std::size_t> erased_slots) {
    std::vector<bool> out(slots, false);
    for (auto s : erased_slots) {
        out[s - 1] = true;
    }
    return out;
}

}  // namespace

TEST_CASE("code parameters") {
    CHECK(CodeParams::stream(5).rate() == doctest::Approx(0.8));
    CHECK(CodeParams::group(10, 2).rate() == doctest::Approx(0.8));
    CHECK(CodeParams::block(10, 8).rate() == doctest::Approx(0.8));
    CHECK(CodeParams::group(10, 3).info_per_interval() == 7);
    CHECK(CodeParams::stream(4).interval() == 4);
    CHECK_THROWS_AS(CodeParams::stream(1).validate(), std::invalid_argument);
    CHECK_THROWS_AS(CodeParams::group(4, 4).validate(), std::invalid_argument);
    CHECK_THROWS_AS(CodeParams::block(4, 5).validate(), std::invalid_argument);
    CHECK(variant_from_string(to_string(Variant::group)) == Variant::group);
    CHECK_THROWS(variant_from_string("turbo"));
}

TEST_CASE("slot layout of the stream code") {
    const auto packets = encode_stream(random_info(4, 2, 1), CodeParams::stream(3), &gf::Field::get(8), 9);
    REQUIRE(packets.size() == 6);
    CHECK(packets[0].kind == PacketKind::info);
    CHECK(packets[1].kind == PacketKind::info);
    CHECK(packets[2].kind == PacketKind::coded);
    CHECK(packets[2].lower == 1);
    CHECK(packets[2].upper == 2);
    CHECK(packets[5].upper == 4);
    CHECK(packets[5].coefficients.size() == 4);
    CHECK(info_send_slots(packets) == std::vector<std::int64_t>{1, 2, 4, 5});
}

TEST_CASE("hand-traced in-order delays") {
    // l = 3: slots 1,2 info, 3 coded over {1,2}, 4,5 info, 6 coded over {1..4}.
    const auto info = random_info(4, 3, 2);
    const auto packets = encode_stream(info, CodeParams::stream(3), &gf::Field::get(8), 4);
    const auto sends = info_send_slots(packets);

    SUBCASE("one erasure repaired by the next coded packet") {
        StreamDecoder dec(CodeParams::stream(3), &gf::Field::get(8), 3);
        const auto events = run_decoder(dec, packets, erasures_at(6, {1}));
        const auto s = per_packet_delay(events, sends);
        CHECK(s.delays == std::vector<std::int64_t>{2, 1, 0, 0});
        CHECK(s.undelivered.empty());
        REQUIRE(dec.busy_log().size() == 1);
        CHECK(dec.busy_log()[0].length == 1);
    }
    SUBCASE("losing the first repair extends the busy period") {
        StreamDecoder dec(CodeParams::stream(3), &gf::Field::get(8), 3);
        const auto events = run_decoder(dec, packets, erasures_at(6, {1, 3}));
        const auto s = per_packet_delay(events, sends);
        CHECK(s.delays == std::vector<std::int64_t>{5, 4, 2, 1});
        REQUIRE(dec.busy_log().size() == 1);
        CHECK(dec.busy_log()[0].length == 2);
        for (std::size_t i = 0; i < events.size(); ++i) {
            CHECK(events[i].payload == info[i]);
        }
    }
    SUBCASE("an unrepaired erasure leaves the tail undelivered") {
        StreamDecoder dec(CodeParams::stream(3), &gf::Field::get(8), 3);
        const auto events = run_decoder(dec, packets, erasures_at(6, {4, 6}));
        const auto s = per_packet_delay(events, sends);
        CHECK(s.delays == std::vector<std::int64_t>{0, 0, -1, -1});
        CHECK(s.undelivered == std::vector<std::int64_t>{3, 4});
        CHECK(dec.busy());
    }
}

TEST_CASE("stream and group round trip over random erasures") {
    const gf::Field& f = gf::Field::get(8);
    for (const auto& params : {CodeParams::stream(4), CodeParams::group(8, 2), CodeParams::group(12, 3)}) {
        CAPTURE(to_string(params.variant));
        CAPTURE(params.interval());
        const auto info = random_info(630, 8, 3);
        const auto packets = params.variant == Variant::stream ? encode_stream(info, params, &f, 21)
                                                               : encode_group(info, params, &f, 21);
        const auto erased = channel::erasure_pattern(channel::IidChannel(0.12), packets.size(), 5);
        StreamDecoder dec(params, &f, 8);
        const auto events = run_decoder(dec, packets, erased);
        REQUIRE(!events.empty());
        for (std::size_t i = 0; i < events.size(); ++i) {
            REQUIRE(events[i].index == static_cast<std::int64_t>(i + 1));
            REQUIRE(events[i].payload == info[i]);
        }
        CHECK(static_cast<std::int64_t>(events.size()) == dec.delivered_prefix());
        CHECK(dec.busy_log().size() > 10);
    }
}

TEST_CASE("a group code with one coded packet per interval is the stream code") {
    const auto info = random_info(200, 4, 6);
    const gf::Field& f = gf::Field::get(8);
    const auto stream = encode_stream(info, CodeParams::stream(5), &f, 77);
    const auto group = encode_group(info, CodeParams::group(5, 1), &f, 77);
    CHECK(stream == group);
}

TEST_CASE("sliding window and full history deliver identically") {
    const gf::Field& f = gf::Field::get(16);
    const auto params = CodeParams::stream(5);
    const std::size_t slots = 5000;
    const auto erased = channel::erasure_pattern(channel::IidChannel(0.1), slots, 13);
    std::vector<std::int64_t> delivered_full;
    std::vector<std::int64_t> delivered_sliding;
    for (auto policy : {WindowPolicy::full_history, WindowPolicy::sliding}) {
        Encoder enc(params, &f, policy, 8, random_source(f, 4, 2));
        StreamDecoder dec(params, &f, 4);
        auto& target = policy == WindowPolicy::full_history ? delivered_full : delivered_sliding;
        for (std::size_t s = 1; s <= slots; ++s) {
            enc.acknowledge(dec.delivered_prefix());
            const Packet p = enc.next();
            for (const auto& d : dec.ingest(static_cast<std::int64_t>(s), erased[s - 1] ? nullptr : &p)) {
                target.push_back(d.slot);
                REQUIRE(d.payload == random_source(f, 4, 2)(d.index));
            }
        }
        CHECK(dec.dependence_events() == 0);
    }
    CHECK(delivered_full == delivered_sliding);
    CHECK(delivered_full.size() > 3500);
}

TEST_CASE("idealized decoder matches the real decoder on erasure timing") {
    const gf::Field& f = gf::Field::get(16);
    const auto params = CodeParams::stream(4);
    const auto info = random_info(2001, 0, 1);
    const auto real = encode_stream(info, params, &f, 3);
    const auto ideal = encode_stream(info, params, nullptr, 3);
    const auto erased = channel::erasure_pattern(channel::IidChannel(0.15), real.size(), 99);
    StreamDecoder dr(params, &f);
    StreamDecoder di(params, nullptr);
    const auto er = run_decoder(dr, real, erased);
    const auto ei = run_decoder(di, ideal, erased);
    REQUIRE(er.size() == ei.size());
    for (std::size_t i = 0; i < er.size(); ++i) {
        CHECK(er[i].slot == ei[i].slot);
    }
    CHECK(dr.dependence_events() == 0);
}

TEST_CASE("block code round trip and expiry") {
    const gf::Field& f = gf::Field::get(8);
    const auto params = CodeParams::block(6, 4);
    const auto info = random_info(40, 5, 4);
    const auto packets = encode_block(info, params, &f, 12);
    REQUIRE(packets.size() == 60);

    SUBCASE("two erasures per block are repaired") {
        BlockDecoder dec(params, &f, 5);
        std::vector<bool> erased(60, false);
        for (std::size_t b = 0; b < 10; ++b) {
            erased[b * 6 + b % 4] = true;
            erased[b * 6 + 4 + b % 2] = b % 3 == 0;
            erased[b * 6 + (b + 1) % 4] = b % 3 != 0;
        }
        const auto events = run_decoder(dec, packets, erased);
        REQUIRE(events.size() == 40);
        for (std::size_t i = 0; i < events.size(); ++i) {
            CHECK(events[i].payload == info[i]);
        }
        CHECK(dec.lost() == 0);
    }
    SUBCASE("three erasures lose the block after expiry") {
        BlockDecoder dec(params, &f, 5);
        std::vector<Delivery> events;
        for (std::size_t i = 0; i < 12; ++i) {
            const bool erased = i == 1 || i == 2 || i == 4;
            auto d = dec.ingest(static_cast<std::int64_t>(i + 1), erased ? nullptr : &packets[i]);
            events.insert(events.end(), d.begin(), d.end());
            if (i == 5) {
                CHECK(dec.degrees_of_freedom(1) == 3);
                auto e = dec.expire(1, 6);
                events.insert(events.end(), e.begin(), e.end());
            }
        }
        CHECK(dec.lost() == 2);
        CHECK(dec.delivered_prefix() == 8);
        std::vector<std::int64_t> idx;
        for (const auto& e : events) {
            idx.push_back(e.index);
        }
        CHECK(idx == std::vector<std::int64_t>{1, 4, 5, 6, 7, 8});
    }
}

TEST_CASE("block retransmissions complete a deficient block") {
    const gf::Field& f = gf::Field::get(8);
    const auto params = CodeParams::block(5, 4);
    BlockEncoder enc(params, &f, 3, random_source(f, 6, 1));
    BlockDecoder dec(params, &f, 6);
    std::int64_t slot = 0;
    for (int i = 0; i < 5; ++i) {
        const Packet p = enc.next();
        dec.ingest(++slot, (i == 0 || i == 2) ? nullptr : &p);
    }
    CHECK(dec.degrees_of_freedom(1) == 3);
    enc.schedule_retransmission(1, 1);
    CHECK(enc.queued_for(1) == 1);
    const Packet r = enc.next();
    CHECK(r.block == 1);
    const auto out = dec.ingest(++slot, &r);
    REQUIRE(out.size() == 4);
    CHECK(out[0].payload == random_source(f, 6, 1)(1));
    CHECK(out[2].payload == random_source(f, 6, 1)(3));
    CHECK(enc.last_send_slot(1) == 6);
    CHECK_THROWS_AS(enc.schedule_retransmission(3, 1), std::invalid_argument);
}

TEST_CASE("decoders reject malformed input") {
    const gf::Field& f = gf::Field::get(8);
    StreamDecoder dec(CodeParams::stream(3), &f);
    CHECK_THROWS_AS(dec.ingest(2, nullptr), std::invalid_argument);
    CHECK_THROWS_AS(StreamDecoder(CodeParams::block(4, 3), &f), std::invalid_argument);
    CHECK_THROWS_AS(BlockDecoder(CodeParams::stream(3), &f), std::invalid_argument);
    CHECK_THROWS_AS(per_packet_delay({Delivery{3, 4, {}}}, {1, 2}), std::out_of_range);
}
