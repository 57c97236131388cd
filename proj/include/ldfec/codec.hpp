#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ldfec/gf.hpp"

namespace ldfec::codec {

using gf::Symbol;

enum class Variant { stream, group, block };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

struct CodeParams {
    Variant variant = Variant::stream;
    int l = 0;   // stream: slots per coded packet
    int lg = 0;  // group: slots per interval
    int c = 1;   // group: coded packets per interval
    int n = 0;   // block length
    int k = 0;   // block dimension

    static CodeParams stream(int l);
    static CodeParams group(int lg, int c);
    static CodeParams block(int n, int k);

    void validate() const;
    double rate() const;
    // Slots per repeating unit of the layout and its split into info and coded slots.
    int interval() const;
    int coded_per_interval() const;
    int info_per_interval() const { return interval() - coded_per_interval(); }

    bool operator==(const CodeParams&) const = default;
};

enum class PacketKind { info, coded };

struct Packet {
    PacketKind kind = PacketKind::info;
    std::int64_t slot = 0;   // 1-based transmission slot
    std::int64_t seq = 0;    // info index (1-based) or coded packet counter
    std::int64_t lower = 0;  // coding window, inclusive; [seq, seq] for info packets
    std::int64_t upper = -1;
    std::int64_t block = 0;  // 1-based block index for the block code, 0 otherwise
    std::vector<Symbol> coefficients;  // one per index in [lower, upper]; empty in ideal mode
    std::vector<Symbol> payload;

    std::int64_t width() const { return upper >= lower ? upper - lower + 1 : 0; }
    bool operator==(const Packet&) const = default;
};

// Supplies the payload of information packet j (1-based).
using InfoSource = std::function<std::vector<Symbol>(std::int64_t)>;

InfoSource vector_source(std::vector<std::vector<Symbol>> packets);
// Deterministic pseudo-random payloads of the given length.
InfoSource random_source(const gf::Field& field, std::size_t symbols, std::uint64_t seed);

enum class WindowPolicy {
    full_history,  // lower edge fixed at 1
    sliding,       // lower edge follows acknowledge()
};

// Stream and group encoder. A stream code with parameter l is the group code (l, 1).
class Encoder {
public:
    // field == nullptr produces coefficient-free packets for the idealized decoder.
    Encoder(const CodeParams& params, const gf::Field* field, WindowPolicy policy, std::uint64_t seed,
            InfoSource source = {});

    Packet next();

    // Every info packet with index <= prefix is known to the receiver.
    void acknowledge(std::int64_t prefix);

    // Additional coded packet over the current window, outside the regular layout.
    Packet tail_packet();

    std::int64_t slot() const { return slot_; }
    std::int64_t info_sent() const { return info_sent_; }
    std::int64_t lower_edge() const { return lower_; }

private:
    Packet make_coded();

    CodeParams params_;
    const gf::Field* field_;
    WindowPolicy policy_;
    InfoSource source_;
    std::mt19937_64 rng_;
    int interval_;
    int info_per_interval_;
    std::int64_t slot_ = 0;
    std::int64_t info_sent_ = 0;
    std::int64_t coded_sent_ = 0;
    std::int64_t lower_ = 1;
    std::int64_t stored_from_ = 1;
    std::deque<std::vector<Symbol>> window_payloads_;
};

std::vector<Packet> encode_stream(const std::vector<std::vector<Symbol>>& info, const CodeParams& params,
                                  const gf::Field* field, std::uint64_t seed,
                                  WindowPolicy policy = WindowPolicy::full_history);
std::vector<Packet> encode_group(const std::vector<std::vector<Symbol>>& info, const CodeParams& params,
                                 const gf::Field* field, std::uint64_t seed);

// Systematic block code: k info packets then n-k coded packets per block.
class BlockEncoder {
public:
    BlockEncoder(const CodeParams& params, const gf::Field* field, std::uint64_t seed, InfoSource source = {});

    Packet next();

    // Queue count extra coded packets for block b; they take priority over the regular layout.
    void schedule_retransmission(std::int64_t block, int count);
    // Payloads of blocks below b are no longer needed.
    void release_before(std::int64_t block);

    std::int64_t slot() const { return slot_; }
    std::size_t pending_retransmissions() const { return retransmit_.size(); }
    std::size_t queued_for(std::int64_t block) const;
    // Slot of the most recent packet (regular or retransmitted) of block b, 0 if none.
    std::int64_t last_send_slot(std::int64_t block) const;
    std::int64_t blocks_started() const;

private:
    Packet make_coded(std::int64_t block);

    CodeParams params_;
    const gf::Field* field_;
    InfoSource source_;
    std::mt19937_64 rng_;
    std::int64_t slot_ = 0;
    std::int64_t regular_ = 0;  // regular layout slots used
    std::int64_t coded_sent_ = 0;
    std::deque<std::int64_t> retransmit_;
    std::map<std::int64_t, std::vector<std::vector<Symbol>>> payloads_;
    std::map<std::int64_t, std::int64_t> last_slot_;
};

std::vector<Packet> encode_block(const std::vector<std::vector<Symbol>>& info, const CodeParams& params,
                                 const gf::Field* field, std::uint64_t seed);

struct Delivery {
    std::int64_t index = 0;  // info packet index
    std::int64_t slot = 0;   // slot at which it is released in order
    std::vector<Symbol> payload;
};

struct BusyRecord {
    std::int64_t first_erasure_slot = 0;  // slot of the erasure that opened the period
    std::int64_t start = 0;               // slots preceding the interval containing it
    std::int64_t end = 0;                 // slot at which decoding completed
    std::int64_t length = 0;              // intervals spanned
    std::int64_t unknowns = 0;            // erased info packets recovered
    gf::OpCounter ops;
};

// Decoder for the stream and group codes. The receiver knows the slot layout, so an erased
// info slot identifies the missing index.
class StreamDecoder {
public:
    // field == nullptr selects the idealized decoder: every coded packet that arrives while
    // packets are missing recovers one of them.
    StreamDecoder(const CodeParams& params, const gf::Field* field, std::size_t payload_symbols = 0);

    // Slots must be fed in order; packet == nullptr marks an erasure.
    std::vector<Delivery> ingest(std::int64_t slot, const Packet* packet);
    // Extra coded packet sent after the regular layout (see Encoder::tail_packet).
    std::vector<Delivery> ingest_tail(std::int64_t slot, const Packet* packet);

    std::int64_t delivered_prefix() const { return delivered_; }
    std::size_t rank() const { return rank_; }
    std::size_t pending_unknowns() const { return unknowns_.size(); }
    bool busy() const { return !unknowns_.empty(); }
    std::uint64_t dependence_events() const { return dependence_events_; }
    const std::vector<BusyRecord>& busy_log() const { return busy_log_; }
    std::int64_t idle_intervals() const { return idle_intervals_; }
    // Intervals spanned so far by a busy period that has not closed, 0 if none.
    std::int64_t open_busy_intervals() const;
    const gf::OpCounter& ops() const { return ops_; }

private:
    struct Row {
        std::size_t lead = 0;
        std::vector<Symbol> coef;
        std::vector<Symbol> payload;
    };

    void on_info(std::int64_t slot, const Packet& p, std::vector<Delivery>& out);
    void on_info_erasure(std::int64_t slot, std::int64_t index);
    void on_coded(std::int64_t slot, const Packet& p, std::vector<Delivery>& out);
    void close_busy(std::int64_t slot, std::vector<Delivery>& out);
    void release(std::int64_t index, std::int64_t slot, std::vector<Symbol> payload, std::vector<Delivery>& out);
    void end_of_interval();

    CodeParams params_;
    const gf::Field* field_;
    std::size_t payload_symbols_;
    int interval_;
    int info_per_interval_;
    std::int64_t last_slot_ = 0;
    std::int64_t info_seen_ = 0;
    std::int64_t delivered_ = 0;
    std::vector<std::int64_t> unknowns_;
    std::map<std::int64_t, std::vector<Symbol>> buffered_;  // received, not yet deliverable
    std::map<std::int64_t, std::vector<Symbol>> known_;     // delivered payloads still inside windows
    std::vector<Row> rows_;
    std::vector<int> pivot_of_;  // column -> row index or -1
    std::size_t rank_ = 0;
    std::uint64_t dependence_events_ = 0;
    gf::OpCounter ops_;
    gf::OpCounter busy_ops_;
    BusyRecord current_;
    std::vector<BusyRecord> busy_log_;
    std::int64_t idle_intervals_ = 0;
    bool interval_touched_ = false;
};

// Decoder for the systematic block code.
class BlockDecoder {
public:
    BlockDecoder(const CodeParams& params, const gf::Field* field, std::size_t payload_symbols = 0);

    std::vector<Delivery> ingest(std::int64_t slot, const Packet* packet);

    // Gives up on block b at the given slot; its missing packets are skipped as lost.
    std::vector<Delivery> expire(std::int64_t block, std::int64_t slot);

    // Degrees of freedom received for block b (k when decoded).
    int degrees_of_freedom(std::int64_t block) const;
    bool decoded(std::int64_t block) const;
    std::int64_t delivered_prefix() const { return delivered_; }
    std::int64_t lost() const { return lost_; }
    std::uint64_t dependence_events() const { return dependence_events_; }
    const gf::OpCounter& ops() const { return ops_; }

private:
    struct BlockState {
        std::vector<bool> have;
        std::vector<std::vector<Symbol>> data;
        std::vector<std::vector<Symbol>> rows;  // reduced coded rows over the k columns
        std::vector<std::vector<Symbol>> row_payload;
        std::vector<int> row_of;                // column -> pivot row or -1
        int received_info = 0;
        int rank = 0;  // coded rank (ideal mode: count)
        bool decoded = false;
        bool expired = false;
    };

    BlockState& state(std::int64_t block);
    void add_coded(BlockState& b, const Packet& p);
    void finish(BlockState& b);
    void advance(std::int64_t slot, std::vector<Delivery>& out);

    CodeParams params_;
    const gf::Field* field_;
    std::size_t payload_symbols_;
    std::map<std::int64_t, BlockState> blocks_;
    std::int64_t delivered_ = 0;
    std::int64_t lost_ = 0;
    std::uint64_t dependence_events_ = 0;
    gf::OpCounter ops_;
};

// Delay of each delivered info packet: delivery slot minus transmission slot.
struct DelaySummary {
    std::vector<std::int64_t> delays;      // indexed by info packet (index - 1); -1 if undelivered
    std::vector<std::int64_t> undelivered;  // indices never delivered
};

DelaySummary per_packet_delay(const std::vector<Delivery>& events, const std::vector<std::int64_t>& send_slots);

}  // namespace ldfec::codec
