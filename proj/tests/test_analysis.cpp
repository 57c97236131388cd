#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "ldfec/analysis.hpp"
#include "ldfec/validation.hpp"

using namespace ldfec::analysis;
using doctest::Approx;
namespace val = ldfec::validation;

TEST_CASE("busy-time moments at l=5, eps=0.1") {
    const auto m = busy_time_moments(5, 0.1);
    CHECK(m.mean == Approx(0.52488).epsilon(1e-12));
    CHECK(m.second == Approx(1.469664).epsilon(1e-12));
    CHECK(m.third == Approx(9.027936).epsilon(1e-12));
    CHECK(m.third_published == Approx(9.8782416).epsilon(1e-12));
    CHECK(m.splus == Approx(1.18098).epsilon(1e-12));
    CHECK(delay_upper_bound(5, 0.1) == Approx(2.4888888889).epsilon(1e-10));
    CHECK(delay_upper_bound(3, 0.1) == Approx(0.3446712018).epsilon(1e-9));
}

TEST_CASE("closed-form moments agree with pmf sums") {
    for (int l : {2, 3, 5, 8}) {
        for (double x : {0.2, 0.5, 0.7}) {
            const double eps = x / l;
            const auto pmf = busy_time_pmf(l, eps, 1e-15);
            long double s1 = 0, s2 = 0, s3 = 0;
            for (std::size_t s = 0; s < pmf.p.size(); ++s) {
                const long double v = static_cast<long double>(s);
                s1 += v * pmf.p[s];
                s2 += v * v * pmf.p[s];
                s3 += v * v * v * pmf.p[s];
            }
            const auto m = busy_time_moments(l, eps);
            CHECK(static_cast<double>(s1) == Approx(m.mean).epsilon(1e-9));
            CHECK(static_cast<double>(s2) == Approx(m.second).epsilon(1e-9));
            CHECK(static_cast<double>(s3) == Approx(m.third).epsilon(1e-8));
            CHECK(m.splus == Approx(pmf.p[0] + m.mean).epsilon(1e-12));
        }
    }
}

TEST_CASE("point probabilities") {
    const double eps = 0.1;
    CHECK(busy_time_probability(5, eps, 0) == Approx(std::pow(0.9, 4)).epsilon(1e-14));
    CHECK(busy_time_probability(5, eps, 1) == Approx(4 * 0.1 * std::pow(0.9, 4)).epsilon(1e-14));
    CHECK(busy_time_probability(3, eps, 2) == Approx(0.019683).epsilon(1e-12));
    for (double e : {0.05, 0.2, 0.4}) {
        CHECK(busy_time_probability(2, e, 2) == Approx(e * e * (1 - e) * (1 - e)).epsilon(1e-13));
    }
}

TEST_CASE("divergent and degenerate regimes") {
    CHECK_THROWS_AS(busy_time_pmf(10, 0.1), DivergenceError);
    CHECK_THROWS_AS(busy_time_moments(4, 0.3), DivergenceError);
    CHECK_THROWS_AS(decoding_cost(2, 0.5), DivergenceError);
    try {
        busy_time_pmf(10, 0.1);
    } catch (const DivergenceError& e) {
        CHECK(std::string(e.what()).rfind("diverges", 0) == 0);
    }
    const auto pmf = busy_time_pmf(5, 0.0);
    REQUIRE(pmf.p.size() == 1);
    CHECK(pmf.p[0] == 1.0);
    CHECK(delay_upper_bound(5, 0.0) == 0.0);
    CHECK(decoding_cost(5, 0.0) == 0.0);
    CHECK(stream_failure_bound(5, 0.0, 4) == 0.0);
    CHECK_THROWS_AS(busy_time_pmf(1, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(busy_time_pmf(5, -0.1), std::invalid_argument);
}

TEST_CASE("tail bound certifies the truncation") {
    const auto pmf = busy_time_pmf(5, 0.1, 1e-13);
    CHECK(pmf.tail_bound <= 1e-13);
    CHECK(stream_tail_bound(5, 0.1, 0) == 1.0);
    // The certified bound dominates the exact tail at several cut points.
    for (std::int64_t k : {1, 3, 6, 10}) {
        double tail = 1.0;
        for (std::int64_t s = 0; s <= k; ++s) {
            tail -= busy_time_probability(5, 0.1, s);
        }
        CHECK(stream_tail_bound(5, 0.1, k) >= tail - 1e-15);
    }
}

TEST_CASE("decoding cost reproduces the published table") {
    CHECK(decoding_cost(5, 0.1) == Approx(3.136667).epsilon(1e-6));
    CHECK(decoding_cost(25, 0.02) == Approx(0.677412).epsilon(1e-5));
    const double published_01[] = {3.13, 8.87, 32.56, 190.96, 3525};
    const double published_002[] = {0.67, 1.93, 7.11, 41.74, 769.58};
    const double frozen_01[] = {3.1367, 8.8714, 32.5611, 190.9667, 3525.0167};
    const double frozen_002[] = {0.6774, 1.9313, 7.1131, 41.7426, 769.5846};
    for (int i = 0; i < 5; ++i) {
        const double a = decoding_cost(5 + i, 0.1);
        const double b = decoding_cost(25 + 5 * i, 0.02);
        CHECK(std::fabs(a - frozen_01[i]) < 1e-4);
        CHECK(std::fabs(b - frozen_002[i]) < 1e-4);
        CHECK(std::fabs(a - published_01[i]) < (i == 4 ? 0.1 : 0.01));
        CHECK(std::fabs(b - published_002[i]) < 0.01);
    }
    CHECK(decoding_cost_consistent(5, 0.1) < decoding_cost(5, 0.1));
}

TEST_CASE("lattice-path counts") {
    const std::vector<std::int64_t> a = {1, 2};
    CHECK(kreweras_count(a, 2) == 5);
    CHECK(kreweras_recursion(a, 2) == 5);
    CHECK(kreweras_recursion_plain(a, 2) == 2);
    CHECK(val::enumerate_dominated(a, 2) == 5);
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 6;
        std::vector<std::int64_t> seq;
        std::int64_t v = static_cast<std::int64_t>(rng() % 3);
        for (std::size_t i = 0; i < n; ++i) {
            seq.push_back(v);
            v += static_cast<std::int64_t>(rng() % 3);
        }
        const BigInt want = val::enumerate_dominated(seq, n);
        CHECK(kreweras_count(seq, n) == want);
        CHECK(kreweras_recursion(seq, n) == want);
    }
    const std::vector<std::int64_t> bad = {2, 1};
    CHECK_THROWS_AS(kreweras_count(bad, 2), std::invalid_argument);
}

TEST_CASE("binomial sum identity and admissible fraction") {
    for (int k = 2; k <= 12; ++k) {
        for (int l = 2; l <= 6; ++l) {
            CHECK(val::binomial_sum_lhs(k, l) == val::binomial_sum_rhs(k, l));
        }
    }
    for (int l : {2, 3}) {
        for (int k = 1; k <= 6; ++k) {
            for (int r = 1; r <= k; ++r) {
                const auto t = val::tanner_count(k, r, l);
                CHECK(t.admissible * k == t.total * r);
            }
        }
    }
}

TEST_CASE("exhaustive oracle") {
    const auto o = oracle_busy_pmf(3, 1, 0.1, 3);
    const auto pmf = busy_time_pmf(3, 0.1);
    for (int s = 0; s <= 3; ++s) {
        CHECK(o.p[static_cast<std::size_t>(s)] == Approx(pmf.p[static_cast<std::size_t>(s)]).epsilon(1e-12));
    }
    CHECK_FALSE(o.divergent);
    CHECK(oracle_busy_pmf(2, 1, 0.5, 4).divergent);
    CHECK_THROWS_AS(oracle_busy_pmf(5, 1, 0.1, 5), ResourceError);
    // Two info erasures in the first interval, nothing else: busy for two intervals.
    CHECK(classify_pattern(0b000011, 6, 3, 1) == 2);
    CHECK(classify_pattern(0b000000, 3, 3, 1) == 0);
    CHECK(classify_pattern(0b000100, 3, 3, 1) == 0);  // only the coded slot erased
}

TEST_CASE("group counts and distribution") {
    CHECK(group_np_count(4, 2, 2, 0) == 17);
    CHECK(group_np_count(4, 2, 2, 1) == 4);
    CHECK(group_np_count(4, 2, 3, 0) == 134);
    CHECK(group_np_count(4, 2, 3, 1) == 28);
    CHECK_THROWS_AS(group_np_count(4, 2, 2, 2), std::invalid_argument);
    const auto g = group_busy_pmf(4, 2, 0.1);
    CHECK(g.p[0] == Approx(0.81).epsilon(1e-14));
    CHECK(g.p[1] == Approx(0.1863).epsilon(1e-13));
    CHECK(g.p[2] == Approx(0.00347733).epsilon(1e-12));
    CHECK(g.p[3] == Approx(0.000205136226).epsilon(1e-10));
    const auto o = oracle_busy_pmf(4, 2, 0.1, 4);
    for (int s = 2; s <= 4; ++s) {
        for (int p = 0; p < 2; ++p) {
            CHECK(group_np_count(4, 2, s, p) ==
                  BigInt(o.counts[static_cast<std::size_t>(s)][static_cast<std::size_t>(2 * s - p)]));
        }
    }
    CHECK_THROWS_AS(group_busy_pmf(10, 1, 0.1), DivergenceError);
}

TEST_CASE("group delay at rate 0.8") {
    const double frozen[] = {2.4888888889, 4.1301847480, 6.2702693878, 8.6688388317, 11.1765750013};
    double prev = 0;
    for (int c = 1; c <= 5; ++c) {
        const double d = group_delay_per_packet(5, c, 0.1);
        CHECK(d == Approx(frozen[c - 1]).epsilon(1e-9));
        CHECK(d >= prev);
        prev = d;
    }
    CHECK(group_delay_per_packet(5, 1, 0.1) == Approx(delay_upper_bound(5, 0.1)).epsilon(1e-12));
}

TEST_CASE("rank bounds and staircase probabilities") {
    auto b = rank_bounds(1, 2);
    CHECK(b.lower == Approx(0.5).epsilon(1e-15));
    CHECK(b.upper == Approx(0.5).epsilon(1e-15));
    for (double q : {2.0, 4.0, 256.0}) {
        b = rank_bounds(2, q);
        const double want = (1 - 1 / (q * q)) * (1 - 1 / q);
        CHECK(b.lower == Approx(want).epsilon(1e-14));
        CHECK(b.upper == Approx(want).epsilon(1e-14));
    }
    for (int k = 1; k <= 6; ++k) {
        for (double q : {2.0, 4.0}) {
            const auto bounds = rank_bounds(k, q);
            CHECK(full_rank_probability(std::vector<int>(static_cast<std::size_t>(k), 0), q) ==
                  Approx(bounds.upper).epsilon(1e-14));
            std::vector<int> worst = {0};
            for (int i = 2; i <= k; ++i) {
                worst.push_back(i - 2);
            }
            CHECK(full_rank_probability(worst, q) == Approx(bounds.lower).epsilon(1e-14));
            for (const auto& e : val::admissible_patterns(k)) {
                const double p = full_rank_probability(val::column_zeros(e), q);
                CHECK(p >= bounds.lower - 1e-15);
                CHECK(p <= bounds.upper + 1e-15);
            }
        }
    }
    CHECK(val::column_zeros({2, 1, 1, 0}) == std::vector<int>{0, 0, 1, 2});
    CHECK(val::admissible_patterns(3).size() == 2);
}

TEST_CASE("failure bounds") {
    const auto c2 = closed_form_failure_bound(5, 0.1, 2);
    CHECK(c2.epsilon0 == Approx(0.0641519663080744).epsilon(1e-12));
    CHECK(c2.residual < 1e-12);
    CHECK(c2.bound == Approx(0.0319391079036).epsilon(1e-10));
    CHECK(stream_failure_bound(5, 0.1, 2) == Approx(c2.bound).epsilon(1e-10));
    const auto c256 = closed_form_failure_bound(5, 0.1, 256);
    CHECK(c256.bound == Approx(0.00022796491995).epsilon(1e-9));
    CHECK(std::log10(c256.bound) == Approx(-3.6421).epsilon(1e-4));
    double prev = 1;
    for (double q : {2.0, 4.0, 16.0, 256.0, 65536.0}) {
        const double v = closed_form_failure_bound(5, 0.1, q).bound;
        CHECK(v >= 0);
        CHECK(v < prev);
        prev = v;
    }
    const auto ex = exact_failure_numeric(5, 0.1, 4, 4);
    CHECK(ex.value == Approx(0.0145173).epsilon(1e-5));
    CHECK(ex.lower <= ex.value);
    CHECK(ex.value <= ex.upper);
    CHECK(ex.covered_mass == Approx(0.330864).epsilon(1e-5));
    CHECK(ex.patterns == 7498);
    CHECK_THROWS_AS(exact_failure_numeric(5, 0.1, 4, 7), ResourceError);
}

TEST_CASE("throughput tail") {
    CHECK(throughput_tail(5, 0.1, 10000, 0.75) == Approx(1.0));
    CHECK_THROWS_AS(throughput_tail(5, 0.1, 10000, 0.8), std::invalid_argument);
    CHECK(throughput_tail(5, 0.1, 1000, 0.78) <= throughput_tail(5, 0.1, 100000, 0.78));
    CHECK(normal_tail_delta(5, 0.1, 0) == Approx(0.5));
}

TEST_CASE("exact binomials and compensated sums") {
    CHECK(exact_binomial(60, 30) == BigInt("118264581564861424"));
    CHECK(exact_binomial(5, 7) == 0);
    CHECK(log_binomial(60, 30) == Approx(std::log(118264581564861424.0)).epsilon(1e-12));
    CompensatedSum s;
    s.add(1.0L);
    for (int i = 0; i < 1000; ++i) {
        s.add(1e-20L);
    }
    CHECK(static_cast<double>(s.value() - 1.0L) == Approx(1e-17).epsilon(1e-6));
}
