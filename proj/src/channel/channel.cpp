#include "ldfec/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ldfec::channel {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

std::uint64_t probability_threshold(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("probability must lie in [0, 1]");
    }
    if (p >= 1.0) {
        return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(std::ldexp(p, 64));
}

IidChannel::IidChannel(double eps) : epsilon(eps) {
    if (!(eps >= 0.0 && eps < 1.0)) {
        throw std::invalid_argument("erasure probability must lie in [0, 1)");
    }
}

GilbertElliottChannel GilbertElliottChannel::from_burst(double pi_b, double expected_burst) {
    if (!(pi_b >= 0.0 && pi_b < 1.0)) {
        throw std::invalid_argument("pi_B must lie in [0, 1)");
    }
    if (!(expected_burst >= 1.0)) {
        throw std::invalid_argument("expected burst length must be at least 1");
    }
    GilbertElliottChannel ch;
    ch.pi_b = pi_b;
    ch.expected_burst = expected_burst;
    ch.beta = 1.0 / expected_burst;
    ch.gamma = ch.beta * pi_b / (1.0 - pi_b);
    if (ch.gamma > 1.0) {
        throw std::invalid_argument("pi_B too large for this burst length (gamma > 1)");
    }
    return ch;
}

double loss_rate(const ChannelModel& model) {
    if (const auto* iid = std::get_if<IidChannel>(&model)) {
        return iid->epsilon;
    }
    return std::get<GilbertElliottChannel>(model).pi_b;
}

ErasureProcess::ErasureProcess(const ChannelModel& model, std::uint64_t seed, std::uint64_t stream)
    : rng_(make_rng(seed, stream)) {
    if (const auto* iid = std::get_if<IidChannel>(&model)) {
        erase_ = probability_threshold(iid->epsilon);
        return;
    }
    const auto& ge = std::get<GilbertElliottChannel>(model);
    markov_ = true;
    enter_bad_ = probability_threshold(ge.gamma);
    leave_bad_ = probability_threshold(ge.beta);
    bad_ = rng_() < probability_threshold(ge.pi_b);
}

std::vector<bool> erasure_pattern(const ChannelModel& model, std::size_t slots, std::uint64_t seed) {
    ErasureProcess process(model, seed);
    std::vector<bool> out(slots);
    for (std::size_t i = 0; i < slots; ++i) {
        out[i] = process.next();
    }
    return out;
}

}  // namespace ldfec::channel
