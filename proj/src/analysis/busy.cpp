#include <cmath>
#include <sstream>

#include "ldfec/analysis.hpp"
#include "internal.hpp"

namespace ldfec::analysis {

namespace detail {

void check_epsilon(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("erasure probability must lie in [0, 1)");
    }
}

void check_stream(int l, double epsilon) {
    if (l < 2) {
        throw std::invalid_argument("l must be at least 2");
    }
    check_epsilon(epsilon);
    if (static_cast<long double>(l) * epsilon >= 1.0L) {
        std::ostringstream os;
        os << "diverges: l*eps >= 1 (l=" << l << ", eps=" << epsilon << ")";
        throw DivergenceError(os.str());
    }
}

double relative_entropy(double a, double b) {
    double d = 0.0;
    if (a > 0.0) {
        d += a * std::log(a / b);
    }
    if (a < 1.0) {
        d += (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
    }
    return d;
}

std::int64_t truncation_point(double rate, double tail_tolerance) {
    if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0)) {
        throw std::invalid_argument("tail tolerance must lie in (0, 1)");
    }
    const double k = std::ceil(-std::log(tail_tolerance) / rate);
    if (!(k < 5e7)) {
        throw ResourceError("truncation point too large for the requested tolerance");
    }
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(k));
}

}  // namespace detail

using detail::check_stream;

double busy_time_probability(int l, double epsilon, std::int64_t s) {
    if (s < 0) {
        return 0.0;
    }
    const long double e = epsilon;
    if (s == 0) {
        return static_cast<double>(std::pow(1.0L - e, l - 1));
    }
    if (epsilon == 0.0) {
        return 0.0;
    }
    const long double lg = std::log(static_cast<long double>(l - 1)) - std::log(static_cast<long double>(s)) +
                           s * std::log(e) + s * (l - 1) * std::log1p(-e) + log_binomial((s - 1) * l, s - 1);
    return static_cast<double>(std::exp(lg));
}

double stream_tail_bound(int l, double epsilon, std::int64_t k) {
    if (k <= 0) {
        return 1.0;
    }
    if (epsilon == 0.0) {
        return 0.0;
    }
    const double a = 1.0 / l;
    if (epsilon >= a) {
        return 1.0;
    }
    return std::min(1.0, std::exp(-static_cast<double>(k) * l * detail::relative_entropy(a, epsilon)));
}

BusyTimePmf busy_time_pmf(int l, double epsilon, double tail_tolerance) {
    check_stream(l, epsilon);
    BusyTimePmf pmf;
    pmf.interval = l;
    pmf.coded = 1;
    pmf.epsilon = epsilon;
    if (epsilon == 0.0) {
        pmf.p = {1.0};
        return pmf;
    }
    const double rate = l * detail::relative_entropy(1.0 / l, epsilon);
    std::int64_t k = detail::truncation_point(rate, tail_tolerance);
    while (stream_tail_bound(l, epsilon, k) > tail_tolerance) {
        ++k;
    }
    pmf.p.resize(static_cast<std::size_t>(k) + 1);
    for (std::int64_t s = 0; s <= k; ++s) {
        pmf.p[static_cast<std::size_t>(s)] = busy_time_probability(l, epsilon, s);
    }
    pmf.tail_bound = stream_tail_bound(l, epsilon, k);
    return pmf;
}

BusyMoments busy_time_moments(int l, double epsilon) {
    check_stream(l, epsilon);
    const long double e = epsilon;
    const long double ll = l;
    const long double d = 1.0L - ll * e;
    const long double q_l = std::pow(1.0L - e, l);
    BusyMoments m;
    m.mean = static_cast<double>((ll - 1) * e * std::pow(1.0L - e, l - 1) / d);
    const long double second = m.mean + ll * (ll - 1) * e * e * q_l / (d * d * d);
    m.second = static_cast<double>(second);
    const long double d5 = d * d * d * d * d;
    const long double consistent_poly = e * e * ll * ll - e * e * ll - 2 * e + 2;
    m.third = static_cast<double>(second + ll * (ll - 1) * e * e * q_l * consistent_poly / d5);
    const long double table_poly = 2 - 2 * e - 2 * ll * e * e + ll * e + ll * ll * e * e * e;
    m.third_published = static_cast<double>(second + ll * (ll - 1) * e * e * q_l * table_poly / d5);
    m.splus = static_cast<double>(q_l / d);
    return m;
}

double delay_upper_bound(int l, double epsilon) {
    const BusyMoments m = busy_time_moments(l, epsilon);
    return m.second * (l - 1) / (2.0 * m.splus);
}

double normal_tail_delta(int l, double epsilon, double k) {
    if (epsilon == 0.0) {
        return 0.0;
    }
    const double g = 1.0 - l * epsilon;
    return 0.5 * std::exp(-k * g * g / (l * epsilon * (1.0 - epsilon)));
}

double throughput_tail(int l, double epsilon, std::int64_t n_slots, double r0) {
    check_stream(l, epsilon);
    const double rate = static_cast<double>(l - 1) / l;
    if (!(r0 < rate)) {
        throw std::invalid_argument("target throughput must be below the code rate (l-1)/l");
    }
    if (n_slots < 0) {
        throw std::invalid_argument("stream length must be nonnegative");
    }
    const double f = static_cast<double>(n_slots) * (rate - r0) / (l - 1);
    return std::max(0.0, 1.0 - normal_tail_delta(l, epsilon, f));
}

double decoding_cost(int l, double epsilon) {
    const BusyMoments m = busy_time_moments(l, epsilon);
    if (epsilon == 0.0) {
        return 0.0;
    }
    return 1.5 * (1.0 - l * epsilon) / ((l - 1) * std::pow(1.0 - epsilon, l)) * m.third_published;
}

double decoding_cost_consistent(int l, double epsilon) {
    const BusyMoments m = busy_time_moments(l, epsilon);
    if (epsilon == 0.0) {
        return 0.0;
    }
    return 1.5 * (1.0 - l * epsilon) / ((l - 1) * std::pow(1.0 - epsilon, l)) * m.third;
}

}  // namespace ldfec::analysis
