#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

namespace ldfec::channel {

// Every random stream in the library is a std::mt19937_64 seeded from (seed, stream id).
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);

// Integer threshold t with P(draw < t) = p for a uniform 64-bit draw.
std::uint64_t probability_threshold(double p);

struct IidChannel {
    double epsilon = 0.0;

    explicit IidChannel(double eps = 0.0);
};

struct GilbertElliottChannel {
    double pi_b = 0.0;            // stationary probability of the bad state
    double expected_burst = 1.0;  // mean sojourn in the bad state, slots
    double beta = 1.0;            // P(B -> G)
    double gamma = 0.0;           // P(G -> B)

    static GilbertElliottChannel from_burst(double pi_b, double expected_burst);
};

using ChannelModel = std::variant<IidChannel, GilbertElliottChannel>;

double loss_rate(const ChannelModel& model);

// Per-slot erasure indicator stream.
class ErasureProcess {
public:
    ErasureProcess(const ChannelModel& model, std::uint64_t seed, std::uint64_t stream = 0);

    bool next() {
        if (!markov_) {
            return rng_() < erase_;
        }
        const bool erased = bad_;
        bad_ = bad_ ? !(rng_() < leave_bad_) : (rng_() < enter_bad_);
        return erased;
    }

private:
    std::mt19937_64 rng_;
    bool markov_ = false;
    bool bad_ = false;
    std::uint64_t erase_ = 0;
    std::uint64_t enter_bad_ = 0;
    std::uint64_t leave_bad_ = 0;
};

std::vector<bool> erasure_pattern(const ChannelModel& model, std::size_t slots, std::uint64_t seed);

// Replaces erased packets with std::nullopt; slot indexing is preserved.
template <typename Packet>
std::vector<std::optional<Packet>> apply(const ChannelModel& model, const std::vector<Packet>& packets,
                                         std::uint64_t seed) {
    ErasureProcess process(model, seed);
    std::vector<std::optional<Packet>> out;
    out.reserve(packets.size());
    for (const auto& p : packets) {
        if (process.next()) {
            out.emplace_back(std::nullopt);
        } else {
            out.emplace_back(p);
        }
    }
    return out;
}

}  // namespace ldfec::channel
