#include <cmath>
#include <sstream>

#include "ldfec/analysis.hpp"
#include "internal.hpp"

namespace ldfec::analysis {

namespace {

void check_group(int lg, int c, double epsilon) {
    if (c < 1 || lg <= c) {
        throw std::invalid_argument("group code requires 1 <= c < lg");
    }
    detail::check_epsilon(epsilon);
    if (static_cast<long double>(lg) * epsilon >= c) {
        std::ostringstream os;
        os << "diverges: lg*eps >= c (lg=" << lg << ", c=" << c << ", eps=" << epsilon << ")";
        throw DivergenceError(os.str());
    }
}

// Dominating sequence for erasure positions u_1 < ... < u_E (b_j = u_j - u_{j-1} - 1),
// or an empty vector when no pattern can satisfy the constraints.
std::vector<std::int64_t> dominating_sequence(int lg, int c, int s, int p) {
    const std::int64_t total = static_cast<std::int64_t>(s) * c - p;
    std::vector<std::int64_t> bound(static_cast<std::size_t>(total) + 1, -1);
    bound[1] = lg - c;
    for (int m = 1; m < s; ++m) {
        const std::int64_t j = static_cast<std::int64_t>(m) * c + 1;
        bound[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(m) * lg;
    }
    auto& last = bound[static_cast<std::size_t>(total)];
    const std::int64_t cap = static_cast<std::int64_t>(s) * lg;
    last = last < 0 ? cap : std::min(last, cap);
    std::vector<std::int64_t> a(static_cast<std::size_t>(total));
    std::int64_t running = INT64_MAX;
    for (std::int64_t j = total; j >= 1; --j) {
        if (bound[static_cast<std::size_t>(j)] >= 0) {
            running = std::min(running, bound[static_cast<std::size_t>(j)] - j);
        }
        a[static_cast<std::size_t>(j - 1)] = running;
    }
    if (a.empty() || a.front() < 0) {
        return {};
    }
    return a;
}

void check_np_args(int lg, int c, int s, int p) {
    if (c < 1 || lg <= c) {
        throw std::invalid_argument("group code requires 1 <= c < lg");
    }
    if (s < 2) {
        throw std::invalid_argument("pattern counts are defined for s >= 2");
    }
    if (p < 0 || p >= c) {
        throw std::invalid_argument("p must lie in [0, c-1]");
    }
}

long double log_of(const BigInt& v) {
    if (v <= 0) {
        return -INFINITY;
    }
    const std::size_t bits = boost::multiprecision::msb(v) + 1;
    if (bits <= 60) {
        return std::log(static_cast<long double>(v.convert_to<std::uint64_t>()));
    }
    const std::size_t shift = bits - 60;
    const BigInt top = v >> shift;
    return std::log(static_cast<long double>(top.convert_to<std::uint64_t>())) +
           static_cast<long double>(shift) * std::log(2.0L);
}

BigInt np_by_recursion(int lg, int c, int s, int p) {
    const auto a = dominating_sequence(lg, c, s, p);
    if (a.empty()) {
        return 0;
    }
    return kreweras_recursion(a, a.size());
}

}  // namespace

BigInt group_np_count(int lg, int c, int s, int p) {
    check_np_args(lg, c, s, p);
    const auto a = dominating_sequence(lg, c, s, p);
    if (a.empty()) {
        return 0;
    }
    return kreweras_count(a, a.size());
}

double group_tail_bound(int lg, int c, double epsilon, std::int64_t k) {
    if (k <= 0) {
        return 1.0;
    }
    if (epsilon == 0.0) {
        return 0.0;
    }
    const double a = static_cast<double>(c) / lg;
    if (epsilon >= a) {
        return 1.0;
    }
    return std::min(1.0, std::exp(-static_cast<double>(k) * lg * detail::relative_entropy(a, epsilon)));
}

BusyTimePmf group_busy_pmf(int lg, int c, double epsilon, double tail_tolerance) {
    check_group(lg, c, epsilon);
    BusyTimePmf pmf;
    pmf.interval = lg;
    pmf.coded = c;
    pmf.epsilon = epsilon;
    const long double e = epsilon;
    pmf.p.push_back(static_cast<double>(std::pow(1.0L - e, lg - c)));
    if (epsilon == 0.0) {
        return pmf;
    }
    const double rate = lg * detail::relative_entropy(static_cast<double>(c) / lg, epsilon);
    std::int64_t k = detail::truncation_point(rate, tail_tolerance);
    while (group_tail_bound(lg, c, epsilon, k) > tail_tolerance) {
        ++k;
    }
    const long double le = std::log(e);
    const long double l1 = std::log1p(-e);
    auto f = [&](std::int64_t x, std::int64_t y) { return x * le + (y - x) * l1; };

    CompensatedSum p1;
    for (int i = 1; i <= c; ++i) {
        for (int j = 0; j <= c - i; ++j) {
            p1.add(std::exp(log_binomial(lg - c, i) + log_binomial(c, j) + f(i + j, lg)));
        }
    }
    pmf.p.push_back(static_cast<double>(p1.value()));
    for (std::int64_t s = 2; s <= k; ++s) {
        CompensatedSum ps;
        for (int p = 0; p < c; ++p) {
            const BigInt np = np_by_recursion(lg, c, static_cast<int>(s), p);
            if (np > 0) {
                ps.add(std::exp(log_of(np) + f(s * c - p, s * lg)));
            }
        }
        pmf.p.push_back(static_cast<double>(ps.value()));
    }
    pmf.tail_bound = group_tail_bound(lg, c, epsilon, k);
    return pmf;
}

double group_delay_per_packet(int l, int c, double epsilon) {
    if (l < 2) {
        throw std::invalid_argument("l must be at least 2");
    }
    const int lg = c * l;
    check_group(lg, c, epsilon);
    if (epsilon == 0.0) {
        return 0.0;
    }
    const BusyTimePmf pmf = group_busy_pmf(lg, c, epsilon, 1e-17);
    CompensatedSum m1;
    CompensatedSum m2;
    for (std::size_t s = 1; s < pmf.p.size(); ++s) {
        const long double ps = pmf.p[s];
        m1.add(ps * s);
        m2.add(ps * s * s);
    }
    const long double mean = m1.value();
    const long double second = m2.value();
    const long double splus = pmf.p[0] + mean;
    const long double work = (lg - c) / 2.0L * (lg * second + (c - 1) * mean);
    return static_cast<double>(work / (lg * splus));
}

}  // namespace ldfec::analysis
