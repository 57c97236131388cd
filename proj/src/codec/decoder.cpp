#include <algorithm>
#include <stdexcept>

#include "ldfec/codec.hpp"

namespace ldfec::codec {

StreamDecoder::StreamDecoder(const CodeParams& params, const gf::Field* field, std::size_t payload_symbols)
    : params_(params),
      field_(field),
      payload_symbols_(field == nullptr ? 0 : payload_symbols),
      interval_(params.interval()),
      info_per_interval_(params.info_per_interval()) {
    params_.validate();
    if (params_.variant == Variant::block) {
        throw std::invalid_argument("use BlockDecoder for the block code");
    }
}

std::vector<Delivery> StreamDecoder::ingest(std::int64_t slot, const Packet* packet) {
    if (slot != last_slot_ + 1) {
        throw std::invalid_argument("slots must be ingested in order without gaps");
    }
    last_slot_ = slot;
    std::vector<Delivery> out;
    const auto pos = static_cast<int>((slot - 1) % interval_);
    if (pos < info_per_interval_) {
        const std::int64_t index = ++info_seen_;
        if (packet == nullptr) {
            on_info_erasure(slot, index);
        } else {
            if (packet->kind != PacketKind::info || packet->seq != index) {
                throw std::invalid_argument("packet does not match the slot layout");
            }
            on_info(slot, *packet, out);
        }
    } else if (packet != nullptr) {
        if (packet->kind != PacketKind::coded) {
            throw std::invalid_argument("packet does not match the slot layout");
        }
        on_coded(slot, *packet, out);
    }
    if (slot % interval_ == 0) {
        end_of_interval();
    }
    return out;
}

std::vector<Delivery> StreamDecoder::ingest_tail(std::int64_t slot, const Packet* packet) {
    if (slot != last_slot_ + 1) {
        throw std::invalid_argument("slots must be ingested in order without gaps");
    }
    last_slot_ = slot;
    std::vector<Delivery> out;
    if (packet != nullptr) {
        if (packet->kind != PacketKind::coded) {
            throw std::invalid_argument("tail packets must be coded");
        }
        on_coded(slot, *packet, out);
    }
    return out;
}

std::int64_t StreamDecoder::open_busy_intervals() const {
    if (!busy()) {
        return 0;
    }
    return (last_slot_ - current_.start + interval_ - 1) / interval_;
}

void StreamDecoder::end_of_interval() {
    if (!interval_touched_ && !busy()) {
        ++idle_intervals_;
    }
    interval_touched_ = busy();
}

void StreamDecoder::release(std::int64_t index, std::int64_t slot, std::vector<Symbol> payload,
                            std::vector<Delivery>& out) {
    delivered_ = index;
    if (payload_symbols_ > 0) {
        known_[index] = payload;
    }
    out.push_back(Delivery{index, slot, std::move(payload)});
}

void StreamDecoder::on_info(std::int64_t slot, const Packet& p, std::vector<Delivery>& out) {
    if (unknowns_.empty()) {
        release(p.seq, slot, payload_symbols_ > 0 ? p.payload : std::vector<Symbol>{}, out);
        return;
    }
    buffered_[p.seq] = payload_symbols_ > 0 ? p.payload : std::vector<Symbol>{};
}

void StreamDecoder::on_info_erasure(std::int64_t slot, std::int64_t index) {
    if (unknowns_.empty()) {
        current_ = BusyRecord{};
        current_.first_erasure_slot = slot;
        current_.start = ((slot - 1) / interval_) * interval_;
        busy_ops_ = gf::OpCounter{};
        interval_touched_ = true;
    }
    unknowns_.push_back(index);
    pivot_of_.push_back(-1);
}

void StreamDecoder::on_coded(std::int64_t slot, const Packet& p, std::vector<Delivery>& out) {
    if (payload_symbols_ > 0) {
        known_.erase(known_.begin(), known_.lower_bound(p.lower));
    }
    if (unknowns_.empty()) {
        return;
    }
    if (field_ == nullptr) {
        const auto lo = std::lower_bound(unknowns_.begin(), unknowns_.end(), p.lower);
        const auto hi = std::upper_bound(unknowns_.begin(), unknowns_.end(), p.upper);
        if (static_cast<std::size_t>(hi - lo) > rank_) {
            ++rank_;
        } else {
            ++dependence_events_;
        }
        if (rank_ == unknowns_.size()) {
            close_busy(slot, out);
        }
        return;
    }
    if (p.coefficients.size() != static_cast<std::size_t>(p.width())) {
        throw std::invalid_argument("coded packet coefficient count does not match its window");
    }
    const gf::Field& f = *field_;
    const std::size_t width = unknowns_.size();
    gf::OpCounter ops;
    Row row;
    row.coef.assign(width, 0);
    if (payload_symbols_ > 0) {
        row.payload = p.payload;
        row.payload.resize(payload_symbols_, 0);
    }
    for (std::size_t i = 0; i < p.coefficients.size(); ++i) {
        const Symbol w = p.coefficients[i];
        if (w == 0) {
            continue;
        }
        const std::int64_t j = p.lower + static_cast<std::int64_t>(i);
        const auto it = std::lower_bound(unknowns_.begin(), unknowns_.end(), j);
        if (it != unknowns_.end() && *it == j) {
            row.coef[static_cast<std::size_t>(it - unknowns_.begin())] = w;
            continue;
        }
        if (payload_symbols_ == 0) {
            continue;
        }
        const std::vector<Symbol>* value = nullptr;
        if (j <= delivered_) {
            const auto k = known_.find(j);
            if (k == known_.end()) {
                throw std::logic_error("coded packet references a packet outside the retained window");
            }
            value = &k->second;
        } else {
            const auto b = buffered_.find(j);
            if (b == buffered_.end()) {
                throw std::logic_error("coded packet references an info packet not yet seen");
            }
            value = &b->second;
        }
        f.axpy(row.payload, w, *value);
        ops.payload_ops += 2 * payload_symbols_;
    }
    std::size_t lead = 0;
    for (;;) {
        while (lead < width && row.coef[lead] == 0) {
            ++lead;
        }
        if (lead == width) {
            ++dependence_events_;
            ops_ += ops;
            busy_ops_ += ops;
            return;
        }
        const int piv = pivot_of_[lead];
        if (piv < 0) {
            break;
        }
        const Row& r = rows_[static_cast<std::size_t>(piv)];
        const Symbol factor = row.coef[lead];
        const std::size_t span = r.coef.size() - lead;
        f.axpy(std::span<Symbol>(row.coef).subspan(lead, span), factor,
               std::span<const Symbol>(r.coef).subspan(lead));
        ops.coefficient_ops += 2 * span;
        if (payload_symbols_ > 0) {
            f.axpy(row.payload, factor, r.payload);
            ops.payload_ops += 2 * payload_symbols_;
        }
    }
    const Symbol inv = f.inv(row.coef[lead]);
    if (inv != 1) {
        f.scale(std::span<Symbol>(row.coef).subspan(lead), inv);
        ops.coefficient_ops += width - lead;
        if (payload_symbols_ > 0) {
            f.scale(row.payload, inv);
            ops.payload_ops += payload_symbols_;
        }
    }
    row.lead = lead;
    pivot_of_[lead] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(row));
    ++rank_;
    ops_ += ops;
    busy_ops_ += ops;
    if (rank_ == unknowns_.size()) {
        close_busy(slot, out);
    }
}

void StreamDecoder::close_busy(std::int64_t slot, std::vector<Delivery>& out) {
    const std::size_t width = unknowns_.size();
    std::vector<std::vector<Symbol>> solved(width);
    if (field_ != nullptr && payload_symbols_ > 0) {
        gf::OpCounter ops;
        for (std::size_t col = width; col-- > 0;) {
            Row& r = rows_[static_cast<std::size_t>(pivot_of_[col])];
            for (std::size_t j = col + 1; j < r.coef.size(); ++j) {
                if (r.coef[j] != 0) {
                    field_->axpy(r.payload, r.coef[j], solved[j]);
                    ops.payload_ops += 2 * payload_symbols_;
                }
            }
            solved[col] = std::move(r.payload);
        }
        ops_ += ops;
        busy_ops_ += ops;
    }
    std::size_t next_unknown = 0;
    const std::int64_t last = std::max(unknowns_.back(), buffered_.empty() ? 0 : buffered_.rbegin()->first);
    for (std::int64_t idx = delivered_ + 1; idx <= last; ++idx) {
        if (next_unknown < width && unknowns_[next_unknown] == idx) {
            release(idx, slot, std::move(solved[next_unknown]), out);
            ++next_unknown;
        } else {
            auto node = buffered_.extract(idx);
            if (node.empty()) {
                throw std::logic_error("gap in the buffered info stream");
            }
            release(idx, slot, std::move(node.mapped()), out);
        }
    }
    current_.end = slot;
    current_.length = (slot - current_.start + interval_ - 1) / interval_;
    current_.unknowns = static_cast<std::int64_t>(width);
    current_.ops = busy_ops_;
    busy_log_.push_back(current_);
    unknowns_.clear();
    pivot_of_.clear();
    rows_.clear();
    buffered_.clear();
    rank_ = 0;
}

DelaySummary per_packet_delay(const std::vector<Delivery>& events, const std::vector<std::int64_t>& send_slots) {
    DelaySummary s;
    s.delays.assign(send_slots.size(), -1);
    for (const auto& e : events) {
        if (e.index < 1 || static_cast<std::size_t>(e.index) > send_slots.size()) {
            throw std::out_of_range("delivery of an info packet that was never sent");
        }
        const std::int64_t d = e.slot - send_slots[static_cast<std::size_t>(e.index - 1)];
        if (d < 0) {
            throw std::logic_error("delivery precedes transmission");
        }
        s.delays[static_cast<std::size_t>(e.index - 1)] = d;
    }
    for (std::size_t i = 0; i < s.delays.size(); ++i) {
        if (s.delays[i] < 0) {
            s.undelivered.push_back(static_cast<std::int64_t>(i + 1));
        }
    }
    return s;
}

}  // namespace ldfec::codec
