#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ldfec/analysis.hpp"

namespace ldfec::validation {

struct CheckResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct Check {
    int id = 0;
    std::string title;
    std::function<CheckResult()> run;
};

// The acceptance suite, one entry per criterion, in order.
const std::vector<Check>& acceptance_checks();

// Runs the checks whose id is listed (all when ids is empty).
std::vector<CheckResult> run_checks(const std::vector<int>& ids = {});

// "PASS  3  title: detail (1.23 s)"
std::string format(const CheckResult& r);

// ---- independent oracles used by the checks and the unit tests ----

// Counts b_1..b_n >= 0 with b_1 + ... + b_j <= a_j by direct enumeration.
analysis::BigInt enumerate_dominated(std::span<const std::int64_t> a, std::size_t n);

// Both sides of sum_{r=2}^{min(k,l)} (r-1) C(l,r) C(l(k-1), k-r) = C((k-1)l, k).
analysis::BigInt binomial_sum_lhs(int k, int l);
analysis::BigInt binomial_sum_rhs(int k, int l);

// Admissible per-interval erasure counts E_1..E_k: prefix sums exceed j for j < k and total k.
std::vector<std::vector<int>> admissible_patterns(int k);

// Column zero counts Z_i of the decoding matrix for an erasure pattern.
std::vector<int> column_zeros(const std::vector<int>& e);

// Fraction of random decoding matrices with the pattern's staircase shape that have full rank.
// Q must be a power of two no larger than 2^8.
double monte_carlo_full_rank(const std::vector<int>& e, unsigned q, std::uint64_t samples, std::uint64_t seed);

// Placements of k - r erasures into k intervals of l slots with r packets already pending:
// the number that keep the busy period open until coded packet k, and the total number.
struct TannerCount {
    analysis::BigInt admissible;
    analysis::BigInt total;
};
TannerCount tanner_count(int k, int r, int l);

}  // namespace ldfec::validation
