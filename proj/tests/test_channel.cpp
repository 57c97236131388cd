#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "ldfec/channel.hpp"

using namespace ldfec::channel;

namespace {

double empirical_rate(const ChannelModel& m, std::size_t slots, std::uint64_t seed) {
    const auto pattern = erasure_pattern(m, slots, seed);
    std::size_t n = 0;
    for (bool e : pattern) {
        n += e ? 1 : 0;
    }
    return static_cast<double>(n) / static_cast<double>(slots);
}

}  // namespace

TEST_CASE("i.i.d. loss rate converges") {
    const double eps = 0.1;
    const std::size_t n = 2'000'000;
    const double rate = empirical_rate(IidChannel(eps), n, 42);
    CHECK(std::fabs(rate - eps) < 4 * std::sqrt(eps * (1 - eps) / n));
    CHECK(empirical_rate(IidChannel(0.0), 10000, 1) == 0.0);
}

TEST_CASE("Gilbert-Elliott parameters and stationary loss") {
    const auto ge = GilbertElliottChannel::from_burst(0.1, 4.0);
    CHECK(ge.beta == doctest::Approx(0.25));
    CHECK(ge.gamma == doctest::Approx(0.25 * 0.1 / 0.9));
    CHECK(loss_rate(ge) == 0.1);
    const double rate = empirical_rate(ge, 4'000'000, 7);
    CHECK(std::fabs(rate - 0.1) < 0.003);
    const double rate1 = empirical_rate(GilbertElliottChannel::from_burst(0.1, 1.0), 2'000'000, 8);
    CHECK(std::fabs(rate1 - 0.1) < 0.002);
}

TEST_CASE("Gilbert-Elliott bursts have the configured mean length") {
    const auto pattern = erasure_pattern(GilbertElliottChannel::from_burst(0.05, 4.0), 4'000'000, 3);
    std::size_t bursts = 0;
    std::size_t lost = 0;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i]) {
            ++lost;
            if (i == 0 || !pattern[i - 1]) {
                ++bursts;
            }
        }
    }
    CHECK(static_cast<double>(lost) / static_cast<double>(bursts) == doctest::Approx(4.0).epsilon(0.03));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(IidChannel(1.0), std::invalid_argument);
    CHECK_THROWS_AS(IidChannel(-0.01), std::invalid_argument);
    CHECK_THROWS_AS(GilbertElliottChannel::from_burst(0.1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(GilbertElliottChannel::from_burst(1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(GilbertElliottChannel::from_burst(0.6, 1.0), std::invalid_argument);  // gamma > 1
    CHECK_THROWS_AS(probability_threshold(1.5), std::invalid_argument);
    CHECK(probability_threshold(0.0) == 0);
    CHECK(probability_threshold(0.5) == (std::uint64_t{1} << 63));
}

TEST_CASE("streams are reproducible and independent") {
    const ChannelModel m = IidChannel(0.3);
    CHECK(erasure_pattern(m, 1000, 5) == erasure_pattern(m, 1000, 5));
    CHECK(erasure_pattern(m, 1000, 5) != erasure_pattern(m, 1000, 6));
    auto a = make_rng(1, 0);
    auto b = make_rng(1, 1);
    CHECK(a() != b());
}

TEST_CASE("apply keeps slot indexing") {
    const std::vector<int> packets = {1, 2, 3, 4, 5, 6, 7, 8};
    const auto out = apply(IidChannel(0.5), packets, 11);
    const auto pattern = erasure_pattern(IidChannel(0.5), packets.size(), 11);
    REQUIRE(out.size() == packets.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        CHECK(out[i].has_value() == !pattern[i]);
        if (out[i]) {
            CHECK(*out[i] == packets[i]);
        }
    }
}
