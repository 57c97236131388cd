#include <cmath>
#include <map>
#include <stdexcept>

#include "ldfec/analysis.hpp"

namespace ldfec::analysis {

BigInt exact_binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    BigInt r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

long double log_binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) {
        return -INFINITY;
    }
    if (k == 0 || k == n) {
        return 0.0L;
    }
    return std::lgamma(static_cast<long double>(n) + 1) - std::lgamma(static_cast<long double>(k) + 1) -
           std::lgamma(static_cast<long double>(n - k) + 1);
}

void CompensatedSum::add(long double x) {
    const long double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
        carry_ += (sum_ - t) + x;
    } else {
        carry_ += (x - t) + sum_;
    }
    sum_ = t;
}

double BusyTimePmf::mass() const {
    CompensatedSum acc;
    for (double v : p) {
        acc.add(v);
    }
    return static_cast<double>(acc.value());
}

namespace {

void check_prefix(std::span<const std::int64_t> a, std::size_t n) {
    if (a.size() < n) {
        throw std::invalid_argument("dominating sequence shorter than n");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] < 0) {
            throw std::invalid_argument("dominating sequence must be nonnegative");
        }
        if (i > 0 && a[i] < a[i - 1]) {
            throw std::invalid_argument("dominating sequence must be nondecreasing");
        }
    }
}

BigInt alternating_recursion(std::span<const std::int64_t> a, std::size_t n, std::int64_t shift) {
    std::map<std::int64_t, std::vector<BigInt>> rows;
    auto binom = [&](std::int64_t top, std::size_t j) -> const BigInt& {
        auto& row = rows[top];
        if (row.empty()) {
            row.push_back(1);
        }
        while (row.size() <= j) {
            const std::int64_t i = static_cast<std::int64_t>(row.size());
            row.push_back(i > top ? BigInt(0) : BigInt(row.back() * (top - i + 1) / i));
        }
        return row[j];
    };
    std::vector<BigInt> count(n + 1);
    count[0] = 1;
    for (std::size_t m = 1; m <= n; ++m) {
        BigInt acc = 0;
        for (std::size_t j = 1; j <= m; ++j) {
            const BigInt term = binom(a[m - j] + shift, j) * count[m - j];
            if (j % 2 == 1) {
                acc += term;
            } else {
                acc -= term;
            }
        }
        count[m] = acc;
    }
    return count[n];
}

}  // namespace

BigInt kreweras_count(std::span<const std::int64_t> a, std::size_t n) {
    check_prefix(a, n);
    if (n == 0) {
        return 1;
    }
    // Row i (1-based) pairs with a_{n-i+1}; entry (i, j) = C(a_{n-i+1} + 1, i - j + 1).
    std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t top = a[n - 1 - i] + 1;
        for (std::size_t j = 0; j < n && j <= i + 1; ++j) {
            m[i][j] = exact_binomial(top, static_cast<std::int64_t>(i + 1 - j));
        }
    }
    // Fraction-free Bareiss elimination.
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0) {
                ++p;
            }
            if (p == n) {
                return 0;
            }
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    BigInt det = m[n - 1][n - 1];
    return sign > 0 ? det : BigInt(-det);
}

BigInt kreweras_recursion(std::span<const std::int64_t> a, std::size_t n) {
    check_prefix(a, n);
    return alternating_recursion(a, n, 1);
}

BigInt kreweras_recursion_plain(std::span<const std::int64_t> a, std::size_t n) {
    check_prefix(a, n);
    return alternating_recursion(a, n, 0);
}

}  // namespace ldfec::analysis
