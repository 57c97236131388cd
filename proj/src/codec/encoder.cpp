#include <algorithm>
#include <memory>
#include <stdexcept>

#include "ldfec/codec.hpp"

namespace ldfec::codec {

namespace {

std::mt19937_64 coefficient_rng(std::uint64_t seed, std::uint32_t tag) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag, 0x636f6566u};
    return std::mt19937_64(seq);
}

Symbol draw_symbol(std::mt19937_64& rng, const gf::Field& field) {
    return static_cast<Symbol>(rng() & (field.order() - 1));
}

}  // namespace

InfoSource vector_source(std::vector<std::vector<Symbol>> packets) {
    auto shared = std::make_shared<std::vector<std::vector<Symbol>>>(std::move(packets));
    return [shared](std::int64_t j) {
        if (j < 1 || static_cast<std::size_t>(j) > shared->size()) {
            throw std::out_of_range("info packet index beyond the supplied stream");
        }
        return (*shared)[static_cast<std::size_t>(j - 1)];
    };
}

InfoSource random_source(const gf::Field& field, std::size_t symbols, std::uint64_t seed) {
    const std::uint32_t mask = field.order() - 1;
    return [mask, symbols, seed](std::int64_t j) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(j >> 32)};
        std::mt19937_64 rng(seq);
        std::vector<Symbol> out(symbols);
        for (auto& s : out) {
            s = static_cast<Symbol>(rng() & mask);
        }
        return out;
    };
}

Encoder::Encoder(const CodeParams& params, const gf::Field* field, WindowPolicy policy, std::uint64_t seed,
                 InfoSource source)
    : params_(params),
      field_(field),
      policy_(policy),
      source_(std::move(source)),
      rng_(coefficient_rng(seed, 1)),
      interval_(params.interval()),
      info_per_interval_(params.info_per_interval()) {
    params_.validate();
    if (params_.variant == Variant::block) {
        throw std::invalid_argument("use BlockEncoder for the block code");
    }
}

Packet Encoder::next() {
    ++slot_;
    const auto pos = static_cast<int>((slot_ - 1) % interval_);
    if (pos >= info_per_interval_) {
        Packet p = make_coded();
        p.slot = slot_;
        return p;
    }
    Packet p;
    p.kind = PacketKind::info;
    p.slot = slot_;
    p.seq = ++info_sent_;
    p.lower = p.seq;
    p.upper = p.seq;
    if (source_) {
        p.payload = source_(p.seq);
    }
    if (field_ != nullptr) {
        p.coefficients = {1};
        window_payloads_.push_back(p.payload);
    }
    return p;
}

void Encoder::acknowledge(std::int64_t prefix) {
    if (policy_ != WindowPolicy::sliding) {
        return;
    }
    lower_ = std::max(lower_, prefix + 1);
    while (stored_from_ < lower_ && !window_payloads_.empty()) {
        window_payloads_.pop_front();
        ++stored_from_;
    }
    stored_from_ = std::max(stored_from_, std::min(lower_, info_sent_ + 1));
}

Packet Encoder::tail_packet() {
    ++slot_;
    Packet p = make_coded();
    p.slot = slot_;
    return p;
}

Packet Encoder::make_coded() {
    Packet p;
    p.kind = PacketKind::coded;
    p.seq = ++coded_sent_;
    p.lower = lower_;
    p.upper = info_sent_;
    if (field_ == nullptr) {
        return p;
    }
    const auto width = static_cast<std::size_t>(p.width());
    p.coefficients.resize(width);
    for (auto& w : p.coefficients) {
        w = draw_symbol(rng_, *field_);
    }
    std::size_t symbols = 0;
    for (const auto& u : window_payloads_) {
        symbols = std::max(symbols, u.size());
    }
    p.payload.assign(symbols, 0);
    for (std::size_t i = 0; i < width; ++i) {
        const auto idx = static_cast<std::size_t>(p.lower - stored_from_) + i;
        field_->axpy(p.payload, p.coefficients[i], window_payloads_[idx]);
    }
    return p;
}

namespace {

std::vector<Packet> encode_layout(const std::vector<std::vector<Symbol>>& info, const CodeParams& params,
                                  const gf::Field* field, std::uint64_t seed, WindowPolicy policy) {
    Encoder enc(params, field, policy, seed, vector_source(info));
    std::vector<Packet> out;
    const auto total = static_cast<std::int64_t>(info.size());
    const int interval = params.interval();
    for (;;) {
        const auto pos = static_cast<int>(enc.slot() % interval);
        if (enc.info_sent() == total && (pos == 0 || pos < params.info_per_interval())) {
            break;
        }
        out.push_back(enc.next());
    }
    // A partial final interval is closed by one extra coded packet over the window.
    if (!out.empty() && out.back().kind == PacketKind::info) {
        out.push_back(enc.tail_packet());
    }
    return out;
}

}  // namespace

std::vector<Packet> encode_stream(const std::vector<std::vector<Symbol>>& info, const CodeParams& params,
                                  const gf::Field* field, std::uint64_t seed, WindowPolicy policy) {
    if (params.variant != Variant::stream) {
        throw std::invalid_argument("encode_stream requires a stream code");
    }
    return encode_layout(info, params, field, seed, policy);
}

std::vector<Packet> encode_group(const std::vector<std::vector<Symbol>>& info, const CodeParams& params,
                                 const gf::Field* field, std::uint64_t seed) {
    if (params.variant == Variant::block) {
        throw std::invalid_argument("encode_group requires a stream or group code");
    }
    return encode_layout(info, params, field, seed, WindowPolicy::full_history);
}

BlockEncoder::BlockEncoder(const CodeParams& params, const gf::Field* field, std::uint64_t seed, InfoSource source)
    : params_(params), field_(field), source_(std::move(source)), rng_(coefficient_rng(seed, 2)) {
    params_.validate();
    if (params_.variant != Variant::block) {
        throw std::invalid_argument("BlockEncoder requires a block code");
    }
}

Packet BlockEncoder::next() {
    ++slot_;
    if (!retransmit_.empty()) {
        const std::int64_t b = retransmit_.front();
        retransmit_.pop_front();
        Packet p = make_coded(b);
        p.slot = slot_;
        last_slot_[b] = slot_;
        return p;
    }
    const std::int64_t pos = regular_ % params_.n;
    const std::int64_t b = regular_ / params_.n + 1;
    ++regular_;
    last_slot_[b] = slot_;
    if (pos < params_.k) {
        Packet p;
        p.kind = PacketKind::info;
        p.slot = slot_;
        p.block = b;
        p.seq = (b - 1) * params_.k + pos + 1;
        p.lower = p.seq;
        p.upper = p.seq;
        if (source_) {
            p.payload = source_(p.seq);
        }
        if (field_ != nullptr) {
            p.coefficients = {1};
            payloads_[b].push_back(p.payload);
        }
        return p;
    }
    Packet p = make_coded(b);
    p.slot = slot_;
    return p;
}

Packet BlockEncoder::make_coded(std::int64_t block) {
    Packet p;
    p.kind = PacketKind::coded;
    p.block = block;
    p.seq = ++coded_sent_;
    p.lower = (block - 1) * params_.k + 1;
    p.upper = block * params_.k;
    if (field_ == nullptr) {
        return p;
    }
    const auto it = payloads_.find(block);
    if (it == payloads_.end() || it->second.size() != static_cast<std::size_t>(params_.k)) {
        throw std::logic_error("coded packet requested for a block whose info packets are not all sent");
    }
    p.coefficients.resize(static_cast<std::size_t>(params_.k));
    std::size_t symbols = 0;
    for (const auto& u : it->second) {
        symbols = std::max(symbols, u.size());
    }
    p.payload.assign(symbols, 0);
    for (std::size_t i = 0; i < p.coefficients.size(); ++i) {
        p.coefficients[i] = draw_symbol(rng_, *field_);
        field_->axpy(p.payload, p.coefficients[i], it->second[i]);
    }
    return p;
}

void BlockEncoder::schedule_retransmission(std::int64_t block, int count) {
    if (block < 1 || block > blocks_started()) {
        throw std::invalid_argument("retransmission requested for a block that was never sent");
    }
    for (int i = 0; i < count; ++i) {
        retransmit_.push_back(block);
    }
}

void BlockEncoder::release_before(std::int64_t block) {
    payloads_.erase(payloads_.begin(), payloads_.lower_bound(block));
    last_slot_.erase(last_slot_.begin(), last_slot_.lower_bound(block));
}

std::size_t BlockEncoder::queued_for(std::int64_t block) const {
    return static_cast<std::size_t>(std::count(retransmit_.begin(), retransmit_.end(), block));
}

std::int64_t BlockEncoder::last_send_slot(std::int64_t block) const {
    const auto it = last_slot_.find(block);
    return it == last_slot_.end() ? 0 : it->second;
}

std::int64_t BlockEncoder::blocks_started() const {
    return (regular_ + params_.n - 1) / params_.n;
}

std::vector<Packet> encode_block(const std::vector<std::vector<Symbol>>& info, const CodeParams& params,
                                 const gf::Field* field, std::uint64_t seed) {
    if (params.variant != Variant::block) {
        throw std::invalid_argument("encode_block requires a block code");
    }
    if (info.size() % static_cast<std::size_t>(params.k) != 0) {
        throw std::invalid_argument("info stream length must be a multiple of k");
    }
    BlockEncoder enc(params, field, seed, vector_source(info));
    std::vector<Packet> out;
    const auto slots = static_cast<std::int64_t>(info.size() / static_cast<std::size_t>(params.k)) * params.n;
    for (std::int64_t i = 0; i < slots; ++i) {
        out.push_back(enc.next());
    }
    return out;
}

}  // namespace ldfec::codec
