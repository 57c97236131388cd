#include <cmath>

#include "ldfec/analysis.hpp"
#include "internal.hpp"

namespace ldfec::analysis {

namespace {

void check_q(double q) {
    if (!(q >= 2.0)) {
        throw std::invalid_argument("field size must be at least 2");
    }
}

double renewal_factor(int l, double epsilon) {
    return (1.0 - l * epsilon) / (l * std::pow(1.0 - epsilon, l));
}

}  // namespace

RankBounds rank_bounds(int k, double q) {
    if (k < 1) {
        throw std::invalid_argument("matrix dimension must be at least 1");
    }
    check_q(q);
    RankBounds b;
    long double upper = 1.0L;
    for (int j = 0; j < k; ++j) {
        upper *= 1.0L - std::pow(static_cast<long double>(q), -(k - j));
    }
    b.upper = static_cast<double>(upper);
    const long double qq = q;
    b.lower = static_cast<double>(qq / (qq + 1) * std::pow(1.0L - 1.0L / (qq * qq), k));
    return b;
}

double full_rank_probability(std::span<const int> zeros, double q) {
    check_q(q);
    long double prod = 1.0L;
    for (std::size_t i = 0; i < zeros.size(); ++i) {
        if (i > 0 && zeros[i] < zeros[i - 1]) {
            throw std::invalid_argument("column zero counts must be nondecreasing");
        }
        const long double exponent = static_cast<long double>(zeros[i]) - static_cast<long double>(i + 1);
        if (exponent >= 0) {
            return 0.0;
        }
        prod *= 1.0L - std::pow(static_cast<long double>(q), exponent);
    }
    return static_cast<double>(prod);
}

double stream_failure_bound(int l, double epsilon, double q, double tail_tolerance) {
    check_q(q);
    const BusyTimePmf pmf = busy_time_pmf(l, epsilon, tail_tolerance);
    if (epsilon == 0.0) {
        return 0.0;
    }
    const long double qq = q;
    const long double lead = qq / (qq + 1);
    const long double ratio = 1.0L - 1.0L / (qq * qq);
    CompensatedSum acc;
    long double power = 1.0L;
    for (std::size_t i = 1; i < pmf.p.size(); ++i) {
        power *= ratio;
        acc.add((1.0L - lead * power) * pmf.p[i]);
    }
    return static_cast<double>(renewal_factor(l, epsilon) * acc.value());
}

ClosedFormBound closed_form_failure_bound(int l, double epsilon, double q) {
    detail::check_stream(l, epsilon);
    check_q(q);
    ClosedFormBound out;
    if (epsilon == 0.0) {
        return out;
    }
    const long double qq = q;
    auto g = [l](long double x) { return x * std::pow(1.0L - x, l - 1); };
    const long double target = (1.0L - 1.0L / (qq * qq)) * g(epsilon);
    long double lo = 0.0L;
    long double hi = epsilon;
    int it = 0;
    while (hi - lo > 1e-18L * std::max(1.0L, hi)) {
        if (++it > 200) {
            throw NumericError("bisection for the reduced erasure rate did not converge");
        }
        const long double mid = 0.5L * (lo + hi);
        if (g(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const long double e0 = 0.5L * (lo + hi);
    out.epsilon0 = static_cast<double>(e0);
    out.residual = static_cast<double>(std::fabs(g(e0) - target));
    out.iterations = it;
    const long double body = qq / (qq + 1) * std::pow(1.0L - e0, l - 1) -
                             std::pow(1.0L - static_cast<long double>(epsilon), l - 1) + 1.0L / (qq + 1);
    out.bound = static_cast<double>(renewal_factor(l, epsilon) * body);
    return out;
}

ExactFailure exact_failure_numeric(int l, double epsilon, double q, int k_max) {
    detail::check_stream(l, epsilon);
    check_q(q);
    if (k_max < 1) {
        throw std::invalid_argument("k_max must be at least 1");
    }
    if (static_cast<long>(k_max) * l > 32) {
        throw ResourceError("pattern enumeration refused: k_max * l must not exceed 32");
    }
    ExactFailure out;
    out.upper = stream_failure_bound(l, epsilon, q);
    if (epsilon == 0.0) {
        return out;
    }
    const long double e = epsilon;
    const long double qq = q;
    std::vector<long double> binom(static_cast<std::size_t>(l));
    for (int i = 0; i < l; ++i) {
        binom[static_cast<std::size_t>(i)] = std::exp(log_binomial(l - 1, i));
    }
    CompensatedSum value;
    CompensatedSum lower;
    CompensatedSum mass;

    // Depth-first walk over intervals: each interval contributes e info erasures (with
    // multiplicity) and an erased or received coded packet.
    struct Frame {
        int interval;
        int queue;
        int received;
        int columns;
        long double weight;
        long double full_rank;
        long double best_case;
    };
    std::vector<Frame> stack;
    stack.push_back({0, 0, 0, 0, 1.0L, 1.0L, 1.0L});
    while (!stack.empty()) {
        const Frame fr = stack.back();
        stack.pop_back();
        for (int info = 0; info < l; ++info) {
            if (fr.interval == 0 && info == 0) {
                continue;
            }
            long double full_rank = fr.full_rank;
            long double best_case = fr.best_case;
            for (int t = 1; t <= info; ++t) {
                const int column = fr.columns + t;
                const long double exponent = static_cast<long double>(fr.received) - column;
                full_rank *= exponent >= 0 ? 0.0L : 1.0L - std::pow(qq, exponent);
                best_case *= 1.0L - std::pow(qq, -static_cast<long double>(column));
            }
            for (int coded_erased = 0; coded_erased <= 1; ++coded_erased) {
                const int erasures = info + coded_erased;
                const long double w = fr.weight * binom[static_cast<std::size_t>(info)] *
                                      std::pow(e, erasures) * std::pow(1.0L - e, l - erasures);
                const int queue = fr.queue + erasures - 1;
                Frame next{fr.interval + 1, queue, fr.received + (coded_erased ? 0 : 1), fr.columns + info, w,
                           full_rank, best_case};
                ++out.patterns;
                if (queue <= 0) {
                    value.add(w * (1.0L - full_rank));
                    lower.add(w * (1.0L - best_case));
                    mass.add(w);
                } else if (next.interval < k_max) {
                    stack.push_back(next);
                }
            }
        }
    }
    const double alpha = renewal_factor(l, epsilon);
    out.value = static_cast<double>(alpha * value.value());
    out.lower = static_cast<double>(alpha * lower.value());
    out.covered_mass = static_cast<double>(mass.value());
    return out;
}

}  // namespace ldfec::analysis
