#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ldfec/channel.hpp"
#include "ldfec/codec.hpp"

namespace ldfec::sim {

enum class Mode { open_loop, closed_loop };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& name);

struct Scenario {
    codec::CodeParams code = codec::CodeParams::stream(5);
    channel::ChannelModel channel = channel::IidChannel(0.0);
    std::int64_t slots = 0;      // stream length N in slots
    Mode mode = Mode::open_loop;
    int feedback_delay = 0;      // round-trip time in slots (closed loop)
    unsigned field_bits = 8;
    bool ideal_recovery = true;  // every useful coded packet recovers one erasure
    bool full_history = false;   // open-loop windows start at packet 1 instead of the receiver's prefix
    std::size_t payload_symbols = 0;
    int tail_packets = 0;        // extra coded packets after the last regular slot
    std::vector<std::uint64_t> seeds = {1};
    int replications = 1;

    void validate() const;
    // N rounded up to whole intervals.
    std::int64_t padded_slots() const;
    // Seed of replication r.
    std::uint64_t seed_for(int r) const;
    int replication_count() const;
    // True when the open-loop busy period has no stationary regime.
    bool divergent() const;
};

struct SeedResult {
    std::uint64_t seed = 0;
    std::int64_t slots = 0;
    std::int64_t info_sent = 0;
    std::int64_t delivered = 0;
    std::int64_t delay_sum = 0;
    std::uint64_t coefficient_ops = 0;

    double mean_delay() const { return delivered ? static_cast<double>(delay_sum) / delivered : 0.0; }
    double delay_per_slot() const { return slots ? static_cast<double>(delay_sum) / slots : 0.0; }
    double good_throughput() const { return slots ? static_cast<double>(delivered) / slots : 0.0; }
    bool operator==(const SeedResult&) const = default;
};

struct SimReport {
    std::string code;
    double rate = 0;
    double loss_rate = 0;
    bool divergent = false;
    bool padded = false;

    std::int64_t slots = 0;        // transmitted slots, all replications
    std::int64_t regular_slots = 0;
    std::int64_t info_sent = 0;
    std::int64_t delivered = 0;
    std::int64_t lost = 0;         // given up by the decoder
    std::int64_t undelivered = 0;  // still pending at stream end
    std::int64_t delay_sum = 0;    // slots, over delivered packets
    std::vector<std::uint64_t> delay_histogram;  // index = delay in slots

    std::vector<std::uint64_t> busy_histogram;   // index = busy length S (intervals)
    std::int64_t idle_intervals = 0;
    std::int64_t open_busy_intervals = 0;
    std::int64_t intervals = 0;

    std::uint64_t dependence_events = 0;
    std::uint64_t coefficient_ops = 0;
    std::uint64_t payload_ops = 0;

    std::vector<SeedResult> per_seed;

    double mean_delay() const;
    double mean_delay_per_slot() const;
    // Standard error of the per-slot delay across replications (0 with fewer than two).
    double delay_per_slot_stderr() const;
    double good_throughput() const;
    double packet_error_rate() const;
    double ops_per_info_packet() const;
    std::uint64_t busy_periods() const;
    std::uint64_t busy_interval_total() const;

    void merge(const SimReport& other);
    std::string to_json() const;
    static SimReport from_json(const std::string& text);
    bool operator==(const SimReport&) const = default;
};

SimReport run(const Scenario& scenario);

// One replication; seed overrides the scenario seeds.
SimReport run_single(const Scenario& scenario, std::uint64_t seed);

enum class SweepAxis { rate, epsilon, c, block_size };

SweepAxis axis_from_string(const std::string& name);
std::string to_string(SweepAxis a);

struct SweepPoint {
    double value = 0;
    Scenario scenario;
    SimReport report;
};

// rate: value is the stream rate (l-1)/l, converted to l (group c and block multiplier kept);
// epsilon: i.i.d. erasure rate (or pi_B); c: group size at fixed rate; block_size: k at fixed rate.
std::vector<SweepPoint> sweep(const Scenario& base, SweepAxis axis, const std::vector<double>& values);

// Good throughput of every replication.
std::vector<double> measure_gt(const Scenario& scenario);

// Worker threads for replications: LDFEC_WORKERS if set, else hardware concurrency.
unsigned worker_count();

}  // namespace ldfec::sim
