#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ldfec::analysis {

using BigInt = boost::multiprecision::cpp_int;

// Raised when the busy period has no stationary distribution (l*eps >= 1, or lg*eps >= c).
class DivergenceError : public std::domain_error {
public:
    explicit DivergenceError(const std::string& what) : std::domain_error(what) {}
};

// Raised when a request would exceed the enumeration budget.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// ---- combinatorics -------------------------------------------------------

BigInt exact_binomial(std::int64_t n, std::int64_t k);
long double log_binomial(std::int64_t n, std::int64_t k);

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(long double x);
    long double value() const { return sum_ + carry_; }

private:
    long double sum_ = 0;
    long double carry_ = 0;
};

// ---- busy period of the stream code ---------------------------------------

struct BusyTimePmf {
    int interval = 0;  // l for the stream code, lg for the group code
    int coded = 1;     // coded packets per interval (c)
    double epsilon = 0;
    std::vector<double> p;   // p[s] for s = 0..s_max
    double tail_bound = 0;   // certified upper bound on P(S > s_max)

    std::size_t s_max() const { return p.empty() ? 0 : p.size() - 1; }
    double mass() const;     // compensated sum of p
};

// Closed-form point probability P(S = s); no divergence check.
double busy_time_probability(int l, double epsilon, std::int64_t s);

// Relative-entropy Chernoff bound on P(S > k) for the stream code.
double stream_tail_bound(int l, double epsilon, std::int64_t k);

BusyTimePmf busy_time_pmf(int l, double epsilon, double tail_tolerance = 1e-13);

struct BusyMoments {
    double mean = 0;             // E(S)
    double second = 0;           // E(S^2)
    double third = 0;            // E(S^3), consistent with the series sum of s^3 p(s)
    double third_published = 0;  // E(S^3) by the cost-table expression
    double splus = 1;            // E(max(S, 1))
};

BusyMoments busy_time_moments(int l, double epsilon);

// Mean in-order delay bound per transmitted slot: E(S^2)(l-1)/(2 E(S+)).
double delay_upper_bound(int l, double epsilon);

// ---- lattice-path counts ---------------------------------------------------

// Sequences b_1..b_n >= 0 with b_1 + ... + b_j <= a_j, via the binomial determinant.
// a must be nonnegative and nondecreasing over its first n entries.
BigInt kreweras_count(std::span<const std::int64_t> a, std::size_t n);
// The same count from the alternating recursion with binomials of a_i + 1.
BigInt kreweras_recursion(std::span<const std::int64_t> a, std::size_t n);
// The recursion with binomials of a_i (no +1), kept for comparison only.
BigInt kreweras_recursion_plain(std::span<const std::int64_t> a, std::size_t n);

// ---- group code ------------------------------------------------------------

// Patterns with s*c - p erasures in s*lg slots whose busy period lasts exactly s intervals.
BigInt group_np_count(int lg, int c, int s, int p);

double group_tail_bound(int lg, int c, double epsilon, std::int64_t k);

BusyTimePmf group_busy_pmf(int lg, int c, double epsilon, double tail_tolerance = 1e-13);

// Mean in-order delay per slot for the group code with lg = c*l.
double group_delay_per_packet(int l, int c, double epsilon);

// ---- throughput --------------------------------------------------------------

// Exponent term 1/2 exp(-k (1-l eps)^2 / (l eps (1-eps))).
double normal_tail_delta(int l, double epsilon, double k);

// Lower bound on P(GT > R0) for a stream of n_slots slots.
double throughput_tail(int l, double epsilon, std::int64_t n_slots, double r0);

// ---- decoding failure --------------------------------------------------------

struct RankBounds {
    double lower = 0;
    double upper = 0;
};

RankBounds rank_bounds(int k, double q);

// Full-rank probability of a random staircase matrix; zeros[i] is the zero count of
// column i + 1, columns ordered by nondecreasing zero count.
double full_rank_probability(std::span<const int> zeros, double q);

double stream_failure_bound(int l, double epsilon, double q, double tail_tolerance = 1e-15);

struct ClosedFormBound {
    double bound = 0;
    double epsilon0 = 0;
    double residual = 0;
    int iterations = 0;
};

ClosedFormBound closed_form_failure_bound(int l, double epsilon, double q);

// Arithmetic operations per information packet, using the cost-table moment expression.
double decoding_cost(int l, double epsilon);
// The same cost using the series-consistent third moment.
double decoding_cost_consistent(int l, double epsilon);

struct ExactFailure {
    double value = 0;          // renewal-weighted failure probability, busy periods <= k_max
    double lower = 0;          // all-zero-column analog over the same patterns
    double upper = 0;          // stream_failure_bound (all busy lengths)
    double covered_mass = 0;   // P(1 <= S <= k_max)
    std::uint64_t patterns = 0;
};

ExactFailure exact_failure_numeric(int l, double epsilon, double q, int k_max);

// ---- exhaustive oracle ------------------------------------------------------

struct OraclePmf {
    int interval = 0;
    int coded = 1;
    double epsilon = 0;
    // counts[s][e]: patterns on s*interval slots (interval slots for s = 0) with e erasures
    // and a busy period of exactly s intervals.
    std::vector<std::vector<std::uint64_t>> counts;
    std::vector<double> p;
    bool divergent = false;  // interval * eps >= coded: the prefix cannot sum to one
};

// Enumerates every erasure pattern with the idealized decoder. Refuses k_max*interval > 24.
OraclePmf oracle_busy_pmf(int interval, int coded, double epsilon, int k_max);

// Busy length of one pattern (bit i = slot i + 1 erased) under the idealized decoder,
// or -1 when the busy period does not close within the pattern.
int classify_pattern(std::uint64_t bits, int slots, int interval, int coded);

}  // namespace ldfec::analysis
