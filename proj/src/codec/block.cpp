#include <stdexcept>

#include "ldfec/codec.hpp"

namespace ldfec::codec {

BlockDecoder::BlockDecoder(const CodeParams& params, const gf::Field* field, std::size_t payload_symbols)
    : params_(params), field_(field), payload_symbols_(field == nullptr ? 0 : payload_symbols) {
    params_.validate();
    if (params_.variant != Variant::block) {
        throw std::invalid_argument("BlockDecoder requires a block code");
    }
}

BlockDecoder::BlockState& BlockDecoder::state(std::int64_t block) {
    auto [it, inserted] = blocks_.try_emplace(block);
    if (inserted) {
        const auto k = static_cast<std::size_t>(params_.k);
        it->second.have.assign(k, false);
        it->second.data.assign(k, {});
        it->second.row_of.assign(k, -1);
    }
    return it->second;
}

int BlockDecoder::degrees_of_freedom(std::int64_t block) const {
    const std::int64_t done_below = delivered_ / params_.k + 1;
    if (block < done_below) {
        return params_.k;
    }
    const auto it = blocks_.find(block);
    if (it == blocks_.end()) {
        return 0;
    }
    if (it->second.decoded) {
        return params_.k;
    }
    return it->second.received_info + it->second.rank;
}

bool BlockDecoder::decoded(std::int64_t block) const {
    return degrees_of_freedom(block) == params_.k;
}

std::vector<Delivery> BlockDecoder::ingest(std::int64_t slot, const Packet* packet) {
    std::vector<Delivery> out;
    if (packet == nullptr) {
        return out;
    }
    const std::int64_t b = packet->block;
    if (b < 1 || b <= delivered_ / params_.k) {
        return out;
    }
    BlockState& st = state(b);
    if (st.decoded || st.expired) {
        return out;
    }
    const std::int64_t base = (b - 1) * params_.k + 1;
    if (packet->kind == PacketKind::info) {
        const auto pos = static_cast<std::size_t>(packet->seq - base);
        if (!st.have[pos]) {
            st.have[pos] = true;
            st.data[pos] = payload_symbols_ > 0 ? packet->payload : std::vector<Symbol>{};
            ++st.received_info;
        }
    } else {
        add_coded(st, *packet);
    }
    if (st.received_info + st.rank == params_.k) {
        finish(st);
    }
    advance(slot, out);
    return out;
}

void BlockDecoder::add_coded(BlockState& st, const Packet& p) {
    const auto k = static_cast<std::size_t>(params_.k);
    if (field_ == nullptr) {
        ++st.rank;
        return;
    }
    if (p.coefficients.size() != k) {
        throw std::invalid_argument("block coded packet must carry k coefficients");
    }
    const gf::Field& f = *field_;
    gf::OpCounter ops;
    std::vector<Symbol> coef = p.coefficients;
    std::vector<Symbol> payload;
    if (payload_symbols_ > 0) {
        payload = p.payload;
        payload.resize(payload_symbols_, 0);
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (st.have[i] && coef[i] != 0) {
            if (payload_symbols_ > 0) {
                f.axpy(payload, coef[i], st.data[i]);
                ops.payload_ops += 2 * payload_symbols_;
            }
            coef[i] = 0;
        }
    }
    std::size_t lead = 0;
    for (;;) {
        while (lead < k && coef[lead] == 0) {
            ++lead;
        }
        if (lead == k) {
            ++dependence_events_;
            ops_ += ops;
            return;
        }
        const int r = st.row_of[lead];
        if (r < 0) {
            break;
        }
        const Symbol factor = coef[lead];
        const auto& row = st.rows[static_cast<std::size_t>(r)];
        f.axpy(std::span<Symbol>(coef).subspan(lead), factor, std::span<const Symbol>(row).subspan(lead));
        ops.coefficient_ops += 2 * (k - lead);
        if (payload_symbols_ > 0) {
            f.axpy(payload, factor, st.row_payload[static_cast<std::size_t>(r)]);
            ops.payload_ops += 2 * payload_symbols_;
        }
    }
    const Symbol inv = f.inv(coef[lead]);
    if (inv != 1) {
        f.scale(std::span<Symbol>(coef).subspan(lead), inv);
        ops.coefficient_ops += k - lead;
        if (payload_symbols_ > 0) {
            f.scale(payload, inv);
            ops.payload_ops += payload_symbols_;
        }
    }
    st.row_of[lead] = static_cast<int>(st.rows.size());
    st.rows.push_back(std::move(coef));
    st.row_payload.push_back(std::move(payload));
    ++st.rank;
    ops_ += ops;
}

void BlockDecoder::finish(BlockState& st) {
    const auto k = static_cast<std::size_t>(params_.k);
    if (field_ != nullptr && payload_symbols_ > 0) {
        for (std::size_t col = k; col-- > 0;) {
            if (st.have[col]) {
                continue;
            }
            const auto r = static_cast<std::size_t>(st.row_of[col]);
            auto& payload = st.row_payload[r];
            for (std::size_t j = col + 1; j < k; ++j) {
                const Symbol w = st.rows[r][j];
                if (w != 0) {
                    field_->axpy(payload, w, st.data[j]);
                    ops_.payload_ops += 2 * payload_symbols_;
                }
            }
            st.data[col] = std::move(payload);
        }
    }
    st.decoded = true;
    st.rows.clear();
    st.row_payload.clear();
}

std::vector<Delivery> BlockDecoder::expire(std::int64_t block, std::int64_t slot) {
    std::vector<Delivery> out;
    if (block <= delivered_ / params_.k) {
        return out;
    }
    BlockState& st = state(block);
    if (!st.decoded) {
        st.expired = true;
    }
    advance(slot, out);
    return out;
}

void BlockDecoder::advance(std::int64_t slot, std::vector<Delivery>& out) {
    for (;;) {
        const std::int64_t idx = delivered_ + 1;
        const std::int64_t b = (idx - 1) / params_.k + 1;
        const auto it = blocks_.find(b);
        if (it == blocks_.end()) {
            return;
        }
        BlockState& st = it->second;
        const auto pos = static_cast<std::size_t>((idx - 1) % params_.k);
        if (st.decoded || st.have[pos]) {
            delivered_ = idx;
            out.push_back(Delivery{idx, slot, st.decoded ? std::move(st.data[pos]) : st.data[pos]});
        } else if (st.expired) {
            delivered_ = idx;
            ++lost_;
        } else {
            return;
        }
        if (pos + 1 == static_cast<std::size_t>(params_.k)) {
            blocks_.erase(it);
        }
    }
}

}  // namespace ldfec::codec
