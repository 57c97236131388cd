#include "ldfec/validation.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "ldfec/channel.hpp"
#include "ldfec/gf.hpp"
#include "ldfec/sim.hpp"

namespace ldfec::validation {

using analysis::BigInt;

namespace {

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string num(double v, int digits = 6) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

void count_dominated(std::span<const std::int64_t> a, std::size_t n, std::size_t j, std::int64_t sum,
                     BigInt& total) {
    if (j == n) {
        ++total;
        return;
    }
    for (std::int64_t b = 0; sum + b <= a[j]; ++b) {
        count_dominated(a, n, j + 1, sum + b, total);
    }
}

void extend_patterns(int k, std::vector<int>& e, int sum, std::vector<std::vector<int>>& out) {
    const int j = static_cast<int>(e.size());
    if (j == k) {
        if (sum == k) {
            out.push_back(e);
        }
        return;
    }
    // After interval j + 1 the prefix must exceed j + 1 unless it is the last one.
    const int need = j + 1 < k ? j + 2 : k;
    for (int v = std::max(0, need - sum); sum + v <= k; ++v) {
        e.push_back(v);
        extend_patterns(k, e, sum + v, out);
        e.pop_back();
    }
}

void tanner_walk(int k, int r, int l, int interval, int erasures, const BigInt& ways, TannerCount& out) {
    if (interval == k) {
        if (erasures == k - r) {
            out.total += ways;
        }
        return;
    }
    for (int v = 0; v <= l && erasures + v <= k - r; ++v) {
        tanner_walk(k, r, l, interval + 1, erasures + v, ways * analysis::exact_binomial(l, v), out);
    }
}

void tanner_walk_admissible(int k, int r, int l, int interval, int erasures, const BigInt& ways,
                            TannerCount& out) {
    if (interval == k) {
        if (erasures == k - r) {
            out.admissible += ways;
        }
        return;
    }
    for (int v = 0; v <= l && erasures + v <= k - r; ++v) {
        const int backlog = r + erasures + v - (interval + 1);
        if (interval + 1 < k && backlog <= 0) {
            continue;
        }
        tanner_walk_admissible(k, r, l, interval + 1, erasures + v, ways * analysis::exact_binomial(l, v), out);
    }
}

// ---- individual criteria ---------------------------------------------------------------

CheckResult check_normalization() {
    Stopwatch sw;
    double worst = 0;
    int cases = 0;
    for (int l = 2; l <= 10; ++l) {
        for (int x = 1; x <= 9; ++x) {
            const double eps = x / (10.0 * l);
            const auto pmf = analysis::busy_time_pmf(l, eps);
            worst = std::max(worst, std::fabs(pmf.mass() + pmf.tail_bound - 1.0));
            ++cases;
        }
    }
    const double t = sw.seconds();
    CheckResult r;
    r.pass = worst <= 1e-9 && t < 1.0;
    r.detail = std::to_string(cases) + " grid points, max |mass + tail - 1| = " + num(worst, 3) +
               " (tol 1e-9), runtime " + num(t, 3) + " s (limit 1 s)";
    return r;
}

CheckResult check_stream_oracle() {
    Stopwatch sw;
    double worst = 0;
    int compared = 0;
    bool flags_ok = true;
    for (int l : {2, 3, 4}) {
        for (double eps : {0.1, 0.3}) {
            const int k_max = 20 / l;
            const auto oracle = analysis::oracle_busy_pmf(l, 1, eps, k_max);
            const bool divergent = l * eps >= 1.0;
            flags_ok = flags_ok && oracle.divergent == divergent;
            std::vector<double> expected;
            if (!divergent) {
                expected = analysis::busy_time_pmf(l, eps).p;
            }
            for (int s = 0; s <= k_max; ++s) {
                const auto idx = static_cast<std::size_t>(s);
                const double want =
                    idx < expected.size() ? expected[idx] : analysis::busy_time_probability(l, eps, s);
                worst = std::max(worst, std::fabs(want - oracle.p[idx]));
                ++compared;
            }
        }
    }
    const double t = sw.seconds();
    CheckResult r;
    r.pass = worst <= 1e-12 && flags_ok && t < 60.0;
    r.detail = std::to_string(compared) + " probabilities, max abs diff " + num(worst, 3) +
               " (tol 1e-12), divergence flags " + (flags_ok ? "consistent" : "WRONG") + ", runtime " + num(t, 3) +
               " s (limit 60 s)";
    return r;
}

CheckResult check_group_oracle() {
    Stopwatch sw;
    int count_checks = 0;
    int count_fail = 0;
    int stray = 0;
    double pmf_worst = 0;
    const double eps = 0.1;
    for (int lg = 2; lg <= 6; ++lg) {
        for (int c = 1; c <= std::min(3, lg - 1); ++c) {
            const auto oracle = analysis::oracle_busy_pmf(lg, c, eps, 4);
            for (int s = 2; s <= 4; ++s) {
                const auto& counts = oracle.counts[static_cast<std::size_t>(s)];
                for (std::size_t e = 0; e < counts.size(); ++e) {
                    const int ei = static_cast<int>(e);
                    if ((ei > s * c || ei <= (s - 1) * c) && counts[e] != 0) {
                        ++stray;
                    }
                }
                for (int p = 0; p < c; ++p) {
                    ++count_checks;
                    const BigInt np = analysis::group_np_count(lg, c, s, p);
                    if (np != BigInt(counts[static_cast<std::size_t>(s * c - p)])) {
                        ++count_fail;
                    }
                }
            }
            const auto pmf = analysis::group_busy_pmf(lg, c, eps);
            for (std::size_t s = 0; s <= 4 && s < pmf.p.size(); ++s) {
                pmf_worst = std::max(pmf_worst, std::fabs(pmf.p[s] - oracle.p[s]));
            }
        }
    }
    double reduction_worst = 0;
    for (int l = 2; l <= 6; ++l) {
        for (double e : {0.05, 0.1}) {
            const auto g = analysis::group_busy_pmf(l, 1, e);
            const auto st = analysis::busy_time_pmf(l, e);
            for (std::size_t s = 0; s < std::min(g.p.size(), st.p.size()); ++s) {
                reduction_worst = std::max(reduction_worst, std::fabs(g.p[s] - st.p[s]));
            }
        }
    }
    const double t = sw.seconds();
    CheckResult r;
    r.pass = count_fail == 0 && stray == 0 && pmf_worst <= 1e-12 && reduction_worst <= 1e-12 && t < 120.0;
    r.detail = std::to_string(count_checks - count_fail) + "/" + std::to_string(count_checks) +
               " pattern counts exact, " + std::to_string(stray) + " oracle patterns outside the count ranges, pmf max diff " +
               num(pmf_worst, 3) + ", c=1 reduction max diff " + num(reduction_worst, 3) + " (tol 1e-12), runtime " +
               num(t, 3) + " s (limit 120 s)";
    return r;
}

CheckResult check_lattice_paths() {
    Stopwatch sw;
    int sequences = 0;
    int mismatches = 0;
    std::vector<std::int64_t> a;
    std::function<void(std::int64_t)> visit = [&](std::int64_t from) {
        if (!a.empty()) {
            ++sequences;
            const BigInt want = enumerate_dominated(a, a.size());
            if (analysis::kreweras_count(a, a.size()) != want || analysis::kreweras_recursion(a, a.size()) != want) {
                ++mismatches;
            }
        }
        if (a.size() == 6) {
            return;
        }
        for (std::int64_t v = from; v <= 8; ++v) {
            a.push_back(v);
            visit(v + 1);
            a.pop_back();
        }
    };
    visit(0);
    const std::vector<std::int64_t> small = {1, 2};
    const BigInt enumerated = enumerate_dominated(small, 2);
    const BigInt with_plus = analysis::kreweras_recursion(small, 2);
    const BigInt determinant = analysis::kreweras_count(small, 2);
    const BigInt plain = analysis::kreweras_recursion_plain(small, 2);
    CheckResult r;
    r.pass = mismatches == 0 && enumerated == 5 && with_plus == 5 && determinant == 5 && plain == 4;
    r.detail = std::to_string(sequences - mismatches) + "/" + std::to_string(sequences) +
               " increasing sequences agree (determinant, +1 recursion, enumeration); a=(1,2): enumeration " +
               enumerated.str() + ", determinant " + determinant.str() + ", +1 recursion " + with_plus.str() +
               ", recursion without +1 " + plain.str() + " (expected 4)";
    return r;
}

CheckResult check_binomial_identity() {
    int cases = 0;
    int failures = 0;
    for (int k = 2; k <= 40; ++k) {
        for (int l = 2; l <= 12; ++l) {
            ++cases;
            if (binomial_sum_lhs(k, l) != binomial_sum_rhs(k, l)) {
                ++failures;
            }
        }
    }
    CheckResult r;
    r.pass = failures == 0;
    r.detail = std::to_string(cases - failures) + "/" + std::to_string(cases) + " (k, l) pairs equal in exact arithmetic";
    return r;
}

CheckResult check_busy_monte_carlo() {
    Stopwatch sw;
    sim::Scenario sc;
    sc.code = codec::CodeParams::stream(5);
    sc.channel = channel::IidChannel(0.1);
    sc.slots = 5'000'000;
    sc.seeds = {1, 2, 3, 4};
    const auto rep = sim::run(sc);
    const auto pmf = analysis::busy_time_pmf(5, 0.1);
    const double cycles = static_cast<double>(rep.busy_periods()) + static_cast<double>(rep.idle_intervals);
    const std::size_t top = std::max(pmf.p.size(), rep.busy_histogram.size());
    double tv = pmf.tail_bound;
    for (std::size_t s = 0; s < top; ++s) {
        const double analytic = s < pmf.p.size() ? pmf.p[s] : 0.0;
        double observed = 0.0;
        if (s == 0) {
            observed = static_cast<double>(rep.idle_intervals) / cycles;
        } else if (s < rep.busy_histogram.size()) {
            observed = static_cast<double>(rep.busy_histogram[s]) / cycles;
        }
        tv += std::fabs(observed - analytic);
    }
    tv /= 2;
    const double t = sw.seconds();
    CheckResult r;
    r.pass = tv < 0.01 && rep.busy_periods() >= 1'000'000 && t < 30.0;
    r.detail = std::to_string(rep.busy_periods()) + " busy periods (need 1e6), total variation " + num(tv, 4) +
               " (limit 0.01), runtime " + num(t, 3) + " s (limit 30 s)";
    return r;
}

CheckResult check_delay_bound() {
    Stopwatch sw;
    bool ok = true;
    std::string detail;
    bool tight_ok = false;
    for (int l : {2, 5, 10}) {
        for (double eps : {0.05, 0.1}) {
            if (!detail.empty()) {
                detail += "; ";
            }
            detail += "l=" + std::to_string(l) + " eps=" + num(eps) + ": ";
            if (l * eps >= 1.0) {
                detail += "diverges: l*eps >= 1, no finite bound";
                continue;
            }
            sim::Scenario sc;
            sc.code = codec::CodeParams::stream(l);
            sc.channel = channel::IidChannel(eps);
            sc.slots = 1'000'000;
            sc.seeds.clear();
            for (std::uint64_t s = 1; s <= 20; ++s) {
                sc.seeds.push_back(s);
            }
            const auto rep = sim::run(sc);
            const double measured = rep.mean_delay_per_slot();
            const double se = rep.delay_per_slot_stderr();
            const double bound = analysis::delay_upper_bound(l, eps);
            const bool below = measured <= bound + 3 * se;
            ok = ok && below;
            detail += "sim " + num(measured, 5) + " +- " + num(se, 2) + " vs bound " + num(bound, 5) +
                      (below ? "" : " VIOLATED");
            if (l == 2 && eps == 0.05) {
                const double gap = std::fabs(bound - measured) / measured;
                tight_ok = gap <= 0.25;
                detail += " (gap " + num(100 * gap, 3) + "%, limit 25%)";
            }
        }
    }
    CheckResult r;
    r.pass = ok && tight_ok;
    r.detail = detail + "; runtime " + num(sw.seconds(), 3) + " s";
    return r;
}

CheckResult check_decoding_cost() {
    Stopwatch sw;
    const double c5 = analysis::decoding_cost(5, 0.1);
    const double c25 = analysis::decoding_cost(25, 0.02);
    const bool analytic_ok = std::fabs(c5 - 3.13) <= 0.01 && std::fabs(c25 - 0.67) <= 0.01;
    sim::Scenario sc;
    sc.code = codec::CodeParams::stream(5);
    sc.channel = channel::IidChannel(0.1);
    sc.slots = 1'250'000;
    sc.ideal_recovery = false;
    sc.field_bits = 8;
    const auto rep = sim::run(sc);
    const double measured = rep.ops_per_info_packet();
    const bool sim_ok = std::fabs(measured - 3.13) <= 0.1 * 3.13 && rep.info_sent >= 1'000'000;
    CheckResult r;
    r.pass = analytic_ok && sim_ok;
    r.detail = "cost(5, 0.1) = " + num(c5, 6) + " (want 3.13 +- 0.01), cost(25, 0.02) = " + num(c25, 6) +
               " (want 0.67 +- 0.01); simulated " + num(measured, 5) + " coefficient ops per info packet over " +
               std::to_string(rep.info_sent) + " packets (want 3.13 +- 10%), " +
               std::to_string(rep.dependence_events) + " dependent rows; runtime " + num(sw.seconds(), 3) + " s";
    return r;
}

CheckResult check_group_ordering() {
    Stopwatch sw;
    std::vector<double> analytic;
    std::vector<double> simulated;
    for (int c = 1; c <= 5; ++c) {
        analytic.push_back(analysis::group_delay_per_packet(5, c, 0.1));
        sim::Scenario sc;
        sc.code = codec::CodeParams::group(5 * c, c);
        sc.channel = channel::IidChannel(0.1);
        sc.slots = 3'000'000;
        sc.seeds = {11, 12, 13, 14, 15, 16, 17, 18};
        simulated.push_back(sim::run(sc).mean_delay_per_slot());
    }
    const bool a_ok = std::is_sorted(analytic.begin(), analytic.end());
    const bool s_ok = std::is_sorted(simulated.begin(), simulated.end());
    std::string a_txt;
    std::string s_txt;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        a_txt += (i ? " " : "") + num(analytic[i], 5);
        s_txt += (i ? " " : "") + num(simulated[i], 5);
    }
    CheckResult r;
    r.pass = a_ok && s_ok;
    r.detail = "analytic c=1..5: " + a_txt + (a_ok ? " (nondecreasing)" : " (NOT monotone)") + "; simulated: " + s_txt +
               (s_ok ? " (same ordering)" : " (ordering differs)") + "; runtime " + num(sw.seconds(), 3) + " s";
    return r;
}

CheckResult check_rank_bounds() {
    Stopwatch sw;
    double coincide = 0;
    for (double q : {2.0, 4.0, 256.0}) {
        for (int k : {1, 2}) {
            const auto b = analysis::rank_bounds(k, q);
            coincide = std::max(coincide, std::fabs(b.upper - b.lower));
        }
    }
    constexpr std::uint64_t samples = 100'000;
    std::mt19937_64 pick = channel::make_rng(2024, 7);
    int sampled = 0;
    int outside = 0;
    double worst_z = 0;
    for (unsigned q : {2u, 4u}) {
        for (int k = 1; k <= 6; ++k) {
            const auto patterns = admissible_patterns(k);
            const auto b = analysis::rank_bounds(k, q);
            for (int i = 0; i < 100; ++i) {
                const auto& e = patterns[pick() % patterns.size()];
                const double f = monte_carlo_full_rank(e, q, samples, 1000 * q + 100 * k + i);
                const double n = static_cast<double>(samples);
                const double lo = b.lower - 4 * std::sqrt(b.lower * (1 - b.lower) / n);
                const double hi = b.upper + 4 * std::sqrt(b.upper * (1 - b.upper) / n);
                if (f < lo || f > hi) {
                    ++outside;
                }
                const auto z = column_zeros(e);
                const double exact = analysis::full_rank_probability(z, q);
                const double sd = std::sqrt(std::max(exact * (1 - exact), 1e-12) / n);
                worst_z = std::max(worst_z, std::fabs(f - exact) / sd);
                ++sampled;
            }
        }
    }
    CheckResult r;
    r.pass = coincide <= 1e-15 && outside == 0;
    r.detail = "bounds at k=1,2 differ by at most " + num(coincide, 3) + "; " + std::to_string(sampled - outside) + "/" +
               std::to_string(sampled) + " sampled patterns inside [lower, upper] +- 4 sigma at 1e5 draws (largest deviation from the exact product " +
               num(worst_z, 3) + " sigma); runtime " + num(sw.seconds(), 3) + " s";
    return r;
}

CheckResult check_failure_series() {
    double worst = 0;
    double worst_residual = 0;
    int cases = 0;
    for (int l : {5, 7}) {
        for (double eps : {0.05, 0.1}) {
            for (double q : {4.0, 256.0}) {
                const double series = analysis::stream_failure_bound(l, eps, q);
                const auto closed = analysis::closed_form_failure_bound(l, eps, q);
                worst = std::max(worst, std::fabs(series - closed.bound));
                worst_residual = std::max(worst_residual, closed.residual);
                ++cases;
            }
        }
    }
    CheckResult r;
    r.pass = worst <= 1e-10 && worst_residual < 1e-12;
    r.detail = std::to_string(cases) + " cases, max |series - closed form| = " + num(worst, 3) +
               " (tol 1e-10), max root residual " + num(worst_residual, 3) + " (limit 1e-12)";
    return r;
}

CheckResult check_throughput_tail() {
    Stopwatch sw;
    sim::Scenario sc;
    sc.code = codec::CodeParams::stream(5);
    sc.channel = channel::IidChannel(0.1);
    sc.slots = 10'000;
    sc.seeds = {1};
    sc.replications = 100'000;
    const auto gts = sim::measure_gt(sc);
    const auto above = std::count_if(gts.begin(), gts.end(), [](double g) { return g > 0.75; });
    const double frac = static_cast<double>(above) / static_cast<double>(gts.size());
    const double bound = analysis::throughput_tail(5, 0.1, sc.slots, 0.75);
    const double worst = *std::min_element(gts.begin(), gts.end());
    const double t = sw.seconds();
    CheckResult r;
    r.pass = frac >= bound && t < 120.0;
    r.detail = "Pr(GT > 0.75) = " + std::to_string(above) + "/" + std::to_string(gts.size()) + " = " + num(frac, 8) +
               " vs bound " + num(bound, 8) + " (lowest GT " + num(worst, 5) + "), runtime " + num(t, 3) +
               " s (limit 120 s)";
    return r;
}

CheckResult check_out_of_reach() {
    const auto numeric = analysis::exact_failure_numeric(5, 0.1, 4, 4);
    const auto bound = analysis::closed_form_failure_bound(5, 0.1, 256);
    const bool computed = std::isfinite(numeric.value) && numeric.value >= 0 && std::isfinite(bound.bound) &&
                          bound.bound >= 0;
    CheckResult r;
    r.pass = computed;
    r.detail = "reported only: failure per packet at l=5, Q=4 (busy periods <= 4, " + num(numeric.covered_mass, 4) +
               " of the busy mass) = 10^" + num(std::log10(numeric.value), 4) +
               " against the published 10^-16.71, which needs a method that is not specified; bound at l=5, Q=256 = 10^" +
               num(std::log10(bound.bound), 4) +
               " against the published 10^-2.24 (disagreement reported, not asserted); testbed measurements not reproducible here";
    return r;
}

}  // namespace

BigInt enumerate_dominated(std::span<const std::int64_t> a, std::size_t n) {
    if (n > a.size()) {
        throw std::invalid_argument("sequence shorter than n");
    }
    BigInt total = 0;
    count_dominated(a, n, 0, 0, total);
    return total;
}

BigInt binomial_sum_lhs(int k, int l) {
    BigInt sum = 0;
    for (int r = 2; r <= std::min(k, l); ++r) {
        sum += BigInt(r - 1) * analysis::exact_binomial(l, r) *
               analysis::exact_binomial(static_cast<std::int64_t>(l) * (k - 1), k - r);
    }
    return sum;
}

BigInt binomial_sum_rhs(int k, int l) {
    return analysis::exact_binomial(static_cast<std::int64_t>(k - 1) * l, k);
}

std::vector<std::vector<int>> admissible_patterns(int k) {
    if (k < 1) {
        throw std::invalid_argument("k must be positive");
    }
    std::vector<std::vector<int>> out;
    std::vector<int> e;
    extend_patterns(k, e, 0, out);
    return out;
}

std::vector<int> column_zeros(const std::vector<int>& e) {
    const int k = static_cast<int>(e.size());
    std::vector<int> z(static_cast<std::size_t>(k), 0);
    int prefix = 0;
    for (int j = 0; j < k; ++j) {
        prefix += e[static_cast<std::size_t>(j)];
        for (int i = prefix + 1; i <= k; ++i) {
            ++z[static_cast<std::size_t>(i - 1)];
        }
    }
    return z;
}

double monte_carlo_full_rank(const std::vector<int>& e, unsigned q, std::uint64_t samples, std::uint64_t seed) {
    const int k = static_cast<int>(e.size());
    if (k > 8 || q < 2 || q > 256 || (q & (q - 1)) != 0) {
        throw std::invalid_argument("monte_carlo_full_rank supports k <= 8 and Q = 2^m <= 256");
    }
    const unsigned m = static_cast<unsigned>(std::countr_zero(q));
    const gf::Field& field = gf::Field::get(m);
    std::array<int, 8> width{};
    int prefix = 0;
    for (int j = 0; j < k; ++j) {
        prefix += e[static_cast<std::size_t>(j)];
        width[static_cast<std::size_t>(j)] = std::min(prefix, k);
    }
    std::mt19937_64 rng = channel::make_rng(seed, 0x72616e6b);
    std::uint64_t full = 0;
    std::array<std::array<gf::Symbol, 8>, 8> a{};
    for (std::uint64_t t = 0; t < samples; ++t) {
        std::uint64_t bits = 0;
        unsigned left = 0;
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                gf::Symbol v = 0;
                if (j < width[static_cast<std::size_t>(i)]) {
                    if (left < m) {
                        bits = rng();
                        left = 64;
                    }
                    v = static_cast<gf::Symbol>(bits & (q - 1));
                    bits >>= m;
                    left -= m;
                }
                a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
            }
        }
        int rank = 0;
        for (int col = 0; col < k && rank < k; ++col) {
            int piv = -1;
            for (int i = rank; i < k; ++i) {
                if (a[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] != 0) {
                    piv = i;
                    break;
                }
            }
            if (piv < 0) {
                continue;
            }
            std::swap(a[static_cast<std::size_t>(piv)], a[static_cast<std::size_t>(rank)]);
            const auto& prow = a[static_cast<std::size_t>(rank)];
            const gf::Symbol inv = field.inv(prow[static_cast<std::size_t>(col)]);
            for (int i = rank + 1; i < k; ++i) {
                auto& row = a[static_cast<std::size_t>(i)];
                const gf::Symbol x = row[static_cast<std::size_t>(col)];
                if (x == 0) {
                    continue;
                }
                const gf::Symbol f = field.mul(x, inv);
                for (int j = col; j < k; ++j) {
                    row[static_cast<std::size_t>(j)] ^= field.mul(f, prow[static_cast<std::size_t>(j)]);
                }
            }
            ++rank;
        }
        if (rank == k) {
            ++full;
        }
    }
    return static_cast<double>(full) / static_cast<double>(samples);
}

TannerCount tanner_count(int k, int r, int l) {
    if (k < 1 || r < 1 || r > k || l < 1) {
        throw std::invalid_argument("tanner_count requires 1 <= r <= k and l >= 1");
    }
    TannerCount out;
    tanner_walk(k, r, l, 0, 0, BigInt(1), out);
    tanner_walk_admissible(k, r, l, 0, 0, BigInt(1), out);
    return out;
}

const std::vector<Check>& acceptance_checks() {
    static const std::vector<Check> checks = [] {
        std::vector<Check> c;
        auto add = [&](int id, std::string title, CheckResult (*fn)()) {
            c.push_back({id, title, [id, title, fn] {
                             Stopwatch sw;
                             CheckResult r = fn();
                             r.id = id;
                             r.title = title;
                             r.seconds = sw.seconds();
                             return r;
                         }});
        };
        add(1, "busy-time pmf normalization", check_normalization);
        add(2, "busy-time pmf vs exhaustive oracle", check_stream_oracle);
        add(3, "group counts and pmf vs pattern oracle", check_group_oracle);
        add(4, "lattice-path determinant and recursion", check_lattice_paths);
        add(5, "binomial sum identity", check_binomial_identity);
        add(6, "simulated busy time vs analytic pmf", check_busy_monte_carlo);
        add(7, "in-order delay bound vs simulation", check_delay_bound);
        add(8, "decoding cost table and simulated op count", check_decoding_cost);
        add(9, "group delay ordering in c", check_group_ordering);
        add(10, "full-rank probability bounds", check_rank_bounds);
        add(11, "failure series vs closed form", check_failure_series);
        add(12, "good-throughput tail bound", check_throughput_tail);
        add(13, "results out of desk-scale reach", check_out_of_reach);
        return c;
    }();
    return checks;
}

std::vector<CheckResult> run_checks(const std::vector<int>& ids) {
    std::vector<CheckResult> out;
    for (const auto& c : acceptance_checks()) {
        if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end()) {
            continue;
        }
        try {
            out.push_back(c.run());
        } catch (const std::exception& e) {
            CheckResult r;
            r.id = c.id;
            r.title = c.title;
            r.pass = false;
            r.detail = std::string("error: ") + e.what();
            out.push_back(r);
        }
    }
    return out;
}

std::string format(const CheckResult& r) {
    char head[64];
    std::snprintf(head, sizeof head, "%s %2d ", r.pass ? "PASS" : "FAIL", r.id);
    char tail[32];
    std::snprintf(tail, sizeof tail, " (%.2f s)", r.seconds);
    return std::string(head) + r.title + ": " + r.detail + tail;
}

}  // namespace ldfec::validation
