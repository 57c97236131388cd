#include <bit>
#include <cmath>

#include "ldfec/analysis.hpp"
#include "internal.hpp"

namespace ldfec::analysis {

int classify_pattern(std::uint64_t bits, int slots, int interval, int coded) {
    const std::uint64_t info_mask = (std::uint64_t{1} << (interval - coded)) - 1;
    if ((bits & info_mask) == 0) {
        return 0;
    }
    const std::uint64_t interval_mask = (std::uint64_t{1} << interval) - 1;
    int queue = 0;
    const int intervals = slots / interval;
    for (int j = 0; j < intervals; ++j) {
        queue += std::popcount((bits >> (j * interval)) & interval_mask) - coded;
        if (queue <= 0) {
            return j + 1;
        }
    }
    return -1;
}

OraclePmf oracle_busy_pmf(int interval, int coded, double epsilon, int k_max) {
    if (coded < 1 || interval <= coded) {
        throw std::invalid_argument("oracle requires 1 <= coded < interval");
    }
    detail::check_epsilon(epsilon);
    if (k_max < 0) {
        throw std::invalid_argument("k_max must be nonnegative");
    }
    if (static_cast<long>(std::max(k_max, 1)) * interval > 24) {
        throw ResourceError("exhaustive enumeration refused: k_max * interval must not exceed 24");
    }
    OraclePmf out;
    out.interval = interval;
    out.coded = coded;
    out.epsilon = epsilon;
    out.divergent = static_cast<long double>(interval) * epsilon >= coded;
    const long double e = epsilon;
    for (int s = 0; s <= k_max; ++s) {
        const int slots = std::max(s, 1) * interval;
        std::vector<std::uint64_t> counts(static_cast<std::size_t>(slots) + 1, 0);
        const std::uint64_t total = std::uint64_t{1} << slots;
        for (std::uint64_t bits = 0; bits < total; ++bits) {
            if (classify_pattern(bits, slots, interval, coded) == s) {
                ++counts[static_cast<std::size_t>(std::popcount(bits))];
            }
        }
        CompensatedSum p;
        for (int k = 0; k <= slots; ++k) {
            if (counts[static_cast<std::size_t>(k)] != 0) {
                p.add(static_cast<long double>(counts[static_cast<std::size_t>(k)]) * std::pow(e, k) *
                      std::pow(1.0L - e, slots - k));
            }
        }
        out.counts.push_back(std::move(counts));
        out.p.push_back(static_cast<double>(p.value()));
    }
    return out;
}

}  // namespace ldfec::analysis
