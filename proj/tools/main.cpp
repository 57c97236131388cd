#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ldfec/analysis.hpp"
#include "ldfec/sim.hpp"
#include "ldfec/validation.hpp"
#include "scenario_file.hpp"
#include "table.hpp"

namespace {

using ldfec::cli::Cell;
using ldfec::cli::Table;
namespace analysis = ldfec::analysis;
namespace sim = ldfec::sim;
namespace codec = ldfec::codec;

const char* const kDiverges = "diverges: lε ≥ 1";

// "0.1", "0.05,0.1", "2..10" (step 1) or "0.01..0.09:0.02".
std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(std::stod(item));
            continue;
        }
        const double lo = std::stod(item.substr(0, dots));
        std::string rest = item.substr(dots + 2);
        double step = 1.0;
        if (const auto colon = rest.find(':'); colon != std::string::npos) {
            step = std::stod(rest.substr(colon + 1));
            rest = rest.substr(0, colon);
        }
        const double hi = std::stod(rest);
        if (!(step > 0)) {
            throw std::invalid_argument("range step must be positive in '" + item + "'");
        }
        const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
        for (long i = 0; i <= count; ++i) {
            out.push_back(lo + static_cast<double>(i) * step);
        }
    }
    if (out.empty()) {
        throw std::invalid_argument("empty value list");
    }
    return out;
}

std::vector<int> parse_ints(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_values(text)) {
        if (v != std::round(v)) {
            throw std::invalid_argument("expected integers in '" + text + "'");
        }
        out.push_back(static_cast<int>(std::lround(v)));
    }
    return out;
}

struct Output {
    std::string csv;
    std::string json;
    std::uint64_t seed = 1;
};

Table make_table(const std::string& command, std::uint64_t seed, std::vector<std::string> columns) {
    Table t;
    t.command = command;
    t.seed = seed;
    t.build = LDFEC_BUILD_ID;
    t.columns = std::move(columns);
    return t;
}

void emit(const Table& t, const Output& out) {
    if (out.csv.empty() || out.csv == "-") {
        ldfec::cli::write_csv(std::cout, t);
    } else {
        std::ofstream f(out.csv);
        if (!f) {
            throw std::runtime_error("cannot write '" + out.csv + "'");
        }
        ldfec::cli::write_csv(f, t);
    }
    if (!out.json.empty()) {
        std::ofstream f(out.json);
        if (!f) {
            throw std::runtime_error("cannot write '" + out.json + "'");
        }
        f << ldfec::cli::to_json(t) << "\n";
    }
}

void check_eps(double eps) {
    if (!(eps >= 0.0 && eps < 1.0)) {
        throw std::invalid_argument("--eps values must lie in [0, 1)");
    }
}

bool diverges(int l, double eps) {
    check_eps(eps);
    return static_cast<long double>(l) * eps >= 1.0L;
}

std::vector<Cell> blanks(std::size_t n) {
    return std::vector<Cell>(n, std::string());
}

// ---- analyze ---------------------------------------------------------------------------

struct AnalyzeArgs {
    std::string l = "5";
    std::string eps = "0.1";
    std::string c = "1";
    std::string lg = "10";
    std::string q = "256";
    std::string k = "1..6";
    std::string rate;
    std::int64_t n_slots = 10000;
    double r0 = 0.75;
    int k_max = 0;
    Output out;
};

std::vector<int> stream_ls(const AnalyzeArgs& a) {
    if (a.rate.empty()) {
        return parse_ints(a.l);
    }
    std::vector<int> ls;
    for (double r : parse_values(a.rate)) {
        if (!(r > 0 && r < 1)) {
            throw std::invalid_argument("rate must lie in (0, 1)");
        }
        const double l = 1.0 / (1.0 - r);
        if (std::fabs(l - std::round(l)) > 1e-6) {
            throw std::invalid_argument("rate must equal (l-1)/l for an integer l");
        }
        ls.push_back(static_cast<int>(std::lround(l)));
    }
    return ls;
}

Table analyze_busy(const AnalyzeArgs& a) {
    Table t = make_table("analyze busy", a.out.seed,
                         {"l", "eps", "status", "mean", "second", "third", "third_published", "splus", "delay_bound"});
    for (int l : stream_ls(a)) {
        for (double eps : parse_values(a.eps)) {
            std::vector<Cell> row = {std::int64_t{l}, eps};
            if (diverges(l, eps)) {
                row.emplace_back(kDiverges);
                auto rest = blanks(6);
                row.insert(row.end(), rest.begin(), rest.end());
            } else {
                const auto m = analysis::busy_time_moments(l, eps);
                row.insert(row.end(), {std::string("ok"), m.mean, m.second, m.third, m.third_published, m.splus,
                                       analysis::delay_upper_bound(l, eps)});
            }
            t.add_row(std::move(row));
        }
    }
    return t;
}

Table analyze_pmf(const AnalyzeArgs& a) {
    Table t = make_table("analyze pmf", a.out.seed, {"l", "eps", "status", "s", "p", "tail_bound"});
    for (int l : stream_ls(a)) {
        for (double eps : parse_values(a.eps)) {
            if (diverges(l, eps)) {
                t.add_row({std::int64_t{l}, eps, std::string(kDiverges), std::string(), std::string(), std::string()});
                continue;
            }
            const auto pmf = analysis::busy_time_pmf(l, eps);
            for (std::size_t s = 0; s < pmf.p.size(); ++s) {
                t.add_row({std::int64_t{l}, eps, std::string("ok"), static_cast<std::int64_t>(s), pmf.p[s],
                           pmf.tail_bound});
            }
        }
    }
    return t;
}

Table analyze_cost(const AnalyzeArgs& a) {
    Table t = make_table("analyze cost", a.out.seed, {"l", "eps", "status", "cost", "cost_consistent"});
    for (int l : stream_ls(a)) {
        for (double eps : parse_values(a.eps)) {
            if (diverges(l, eps)) {
                t.add_row({std::int64_t{l}, eps, std::string(kDiverges), std::string(), std::string()});
            } else {
                t.add_row({std::int64_t{l}, eps, std::string("ok"), analysis::decoding_cost(l, eps),
                           analysis::decoding_cost_consistent(l, eps)});
            }
        }
    }
    return t;
}

Table analyze_group(const AnalyzeArgs& a) {
    Table t = make_table("analyze group", a.out.seed, {"l", "c", "lg", "eps", "status", "delay_per_slot"});
    for (int l : stream_ls(a)) {
        for (int c : parse_ints(a.c)) {
            for (double eps : parse_values(a.eps)) {
                std::vector<Cell> row = {std::int64_t{l}, std::int64_t{c}, std::int64_t{l * c}, eps};
                if (diverges(l, eps)) {
                    row.insert(row.end(), {std::string(kDiverges), std::string()});
                } else {
                    row.insert(row.end(), {std::string("ok"), analysis::group_delay_per_packet(l, c, eps)});
                }
                t.add_row(std::move(row));
            }
        }
    }
    return t;
}

Table analyze_group_pmf(const AnalyzeArgs& a) {
    Table t = make_table("analyze group-pmf", a.out.seed, {"lg", "c", "eps", "status", "s", "p", "tail_bound"});
    for (int lg : parse_ints(a.lg)) {
        for (int c : parse_ints(a.c)) {
            for (double eps : parse_values(a.eps)) {
                check_eps(eps);
                if (static_cast<long double>(lg) * eps >= c) {
                    t.add_row({std::int64_t{lg}, std::int64_t{c}, eps, std::string(kDiverges), std::string(),
                               std::string(), std::string()});
                    continue;
                }
                const auto pmf = analysis::group_busy_pmf(lg, c, eps);
                for (std::size_t s = 0; s < pmf.p.size(); ++s) {
                    t.add_row({std::int64_t{lg}, std::int64_t{c}, eps, std::string("ok"), static_cast<std::int64_t>(s),
                               pmf.p[s], pmf.tail_bound});
                }
            }
        }
    }
    return t;
}

Table analyze_failure(const AnalyzeArgs& a) {
    std::vector<std::string> cols = {"l", "eps", "q", "status", "series_bound", "closed_form", "epsilon0", "residual"};
    if (a.k_max > 0) {
        cols.insert(cols.end(), {"numeric", "numeric_lower", "covered_mass"});
    }
    Table t = make_table("analyze failure", a.out.seed, cols);
    for (int l : stream_ls(a)) {
        for (double eps : parse_values(a.eps)) {
            for (double q : parse_values(a.q)) {
                std::vector<Cell> row = {std::int64_t{l}, eps, q};
                if (diverges(l, eps)) {
                    row.emplace_back(kDiverges);
                    auto rest = blanks(cols.size() - 4);
                    row.insert(row.end(), rest.begin(), rest.end());
                } else {
                    const auto closed = analysis::closed_form_failure_bound(l, eps, q);
                    row.insert(row.end(), {std::string("ok"), analysis::stream_failure_bound(l, eps, q), closed.bound,
                                           closed.epsilon0, closed.residual});
                    if (a.k_max > 0) {
                        const auto ex = analysis::exact_failure_numeric(l, eps, q, a.k_max);
                        row.insert(row.end(), {ex.value, ex.lower, ex.covered_mass});
                    }
                }
                t.add_row(std::move(row));
            }
        }
    }
    return t;
}

Table analyze_rank(const AnalyzeArgs& a) {
    Table t = make_table("analyze rank", a.out.seed, {"k", "q", "lower", "upper"});
    for (int k : parse_ints(a.k)) {
        for (double q : parse_values(a.q)) {
            const auto b = analysis::rank_bounds(k, q);
            t.add_row({std::int64_t{k}, q, b.lower, b.upper});
        }
    }
    return t;
}

Table analyze_throughput(const AnalyzeArgs& a) {
    Table t = make_table("analyze throughput", a.out.seed, {"l", "eps", "n_slots", "r0", "status", "bound"});
    for (int l : stream_ls(a)) {
        for (double eps : parse_values(a.eps)) {
            std::vector<Cell> row = {std::int64_t{l}, eps, a.n_slots, a.r0};
            if (diverges(l, eps)) {
                row.insert(row.end(), {std::string(kDiverges), std::string()});
            } else {
                row.insert(row.end(), {std::string("ok"), analysis::throughput_tail(l, eps, a.n_slots, a.r0)});
            }
            t.add_row(std::move(row));
        }
    }
    return t;
}

// ---- simulate / compare ---------------------------------------------------------------

std::string describe(const codec::CodeParams& p) {
    switch (p.variant) {
        case codec::Variant::stream:
            return "l=" + std::to_string(p.l);
        case codec::Variant::group:
            return "lg=" + std::to_string(p.lg) + " c=" + std::to_string(p.c);
        case codec::Variant::block:
            return "n=" + std::to_string(p.n) + " k=" + std::to_string(p.k);
    }
    return "";
}

// Analytic in-order delay per slot when the scenario matches the model behind it.
Cell analytic_delay(const sim::Scenario& sc) {
    if (sc.mode != sim::Mode::open_loop || !std::holds_alternative<ldfec::channel::IidChannel>(sc.channel) ||
        sc.divergent()) {
        return std::string();
    }
    const double eps = std::get<ldfec::channel::IidChannel>(sc.channel).epsilon;
    if (sc.code.variant == codec::Variant::stream) {
        return analysis::delay_upper_bound(sc.code.l, eps);
    }
    if (sc.code.variant == codec::Variant::group && sc.code.lg % sc.code.c == 0) {
        return analysis::group_delay_per_packet(sc.code.lg / sc.code.c, sc.code.c, eps);
    }
    return std::string();
}

std::vector<std::string> report_columns(const std::optional<double>& slot_ms) {
    std::vector<std::string> cols = {"code",        "params",        "rate",          "loss_rate",
                                     "mode",        "status",        "slots",         "info_sent",
                                     "delivered",   "lost",          "undelivered",   "mean_delay",
                                     "mean_delay_per_slot", "delay_per_slot_stderr", "delay_bound_per_slot",
                                     "good_throughput", "packet_error_rate", "busy_periods", "dependence_events",
                                     "ops_per_info_packet"};
    if (slot_ms) {
        cols.push_back("mean_delay_ms");
    }
    return cols;
}

std::vector<Cell> report_row(const sim::Scenario& sc, const sim::SimReport& r, const std::optional<double>& slot_ms) {
    std::vector<Cell> row = {codec::to_string(sc.code.variant),
                             describe(sc.code),
                             sc.code.rate(),
                             r.loss_rate,
                             sim::to_string(sc.mode),
                             std::string(r.divergent ? kDiverges : "ok"),
                             r.slots,
                             r.info_sent,
                             r.delivered,
                             r.lost,
                             r.undelivered,
                             r.mean_delay(),
                             r.mean_delay_per_slot(),
                             r.delay_per_slot_stderr(),
                             analytic_delay(sc),
                             r.good_throughput(),
                             r.packet_error_rate(),
                             static_cast<std::int64_t>(r.busy_periods()),
                             static_cast<std::int64_t>(r.dependence_events),
                             r.ops_per_info_packet()};
    if (slot_ms) {
        row.emplace_back(r.mean_delay() * *slot_ms);
    }
    return row;
}

struct FileArgs {
    std::string file;
    std::optional<std::uint64_t> seed;
    std::optional<int> reps;
    std::optional<double> slot_ms;
    Output out;
};

ldfec::cli::ScenarioFile load(const FileArgs& a) {
    auto f = ldfec::cli::load_scenario_file(a.file);
    if (a.seed) {
        f.scenario.seeds = {*a.seed};
    }
    if (a.reps) {
        f.scenario.replications = *a.reps;
    }
    if (a.slot_ms) {
        f.output.slot_ms = a.slot_ms;
    }
    return f;
}

Output resolve_output(const FileArgs& a, const ldfec::cli::ScenarioFile& f) {
    Output o = a.out;
    if (o.csv.empty()) {
        o.csv = f.output.csv;
    }
    if (o.json.empty()) {
        o.json = f.output.json;
    }
    o.seed = f.scenario.seeds.front();
    return o;
}

void cmd_simulate(const FileArgs& a) {
    const auto f = load(a);
    const Output out = resolve_output(a, f);
    auto cols = report_columns(f.output.slot_ms);
    if (f.sweep) {
        cols.insert(cols.begin(), sim::to_string(f.sweep->axis));
    }
    Table t = make_table("simulate " + a.file, out.seed, cols);
    if (f.sweep) {
        for (const auto& p : sim::sweep(f.scenario, f.sweep->axis, f.sweep->values)) {
            auto row = report_row(p.scenario, p.report, f.output.slot_ms);
            row.insert(row.begin(), p.value);
            t.add_row(std::move(row));
        }
    } else {
        t.add_row(report_row(f.scenario, sim::run(f.scenario), f.output.slot_ms));
    }
    emit(t, out);
}

void cmd_compare(const FileArgs& a) {
    const auto f = load(a);
    if (!f.compare) {
        throw ldfec::cli::ScenarioError("$.compare", "compare needs a \"compare\" section");
    }
    const Output out = resolve_output(a, f);
    auto cols = report_columns(f.output.slot_ms);
    cols.insert(cols.begin(), "target_rate");
    Table t = make_table("compare " + a.file, out.seed, cols);
    for (double rate : f.compare->rates) {
        const double lf = 1.0 / (1.0 - rate);
        const int l = static_cast<int>(std::lround(lf));
        if (l < 2 || std::fabs(lf - l) > 1e-6) {
            throw ldfec::cli::ScenarioError("$.compare.rates", "rate must equal (l-1)/l for an integer l >= 2");
        }
        std::vector<codec::CodeParams> codes = {codec::CodeParams::stream(l)};
        for (int m : f.compare->block_multipliers) {
            codes.push_back(codec::CodeParams::block(m * l, m * (l - 1)));
        }
        for (int c : f.compare->group_c) {
            codes.push_back(codec::CodeParams::group(c * l, c));
        }
        for (const auto& code : codes) {
            sim::Scenario sc = f.scenario;
            sc.code = code;
            if (code.variant == codec::Variant::block) {
                sc.tail_packets = 0;
            }
            auto row = report_row(sc, sim::run(sc), f.output.slot_ms);
            row.insert(row.begin(), rate);
            t.add_row(std::move(row));
        }
    }
    emit(t, out);
}

int cmd_validate(const std::string& only) {
    std::vector<int> ids;
    if (!only.empty()) {
        ids = parse_ints(only);
    }
    int failed = 0;
    for (const auto& r : ldfec::validation::run_checks(ids)) {
        std::cout << ldfec::validation::format(r) << std::endl;
        failed += r.pass ? 0 : 1;
    }
    std::cout << (failed ? std::to_string(failed) + " check(s) failed" : std::string("all checks passed")) << "\n";
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Streaming erasure codes with in-order delivery"};
    app.set_version_flag("--version", std::string("ldfec ") + LDFEC_BUILD_ID);
    app.require_subcommand(1);

    AnalyzeArgs aa;
    auto* analyze = app.add_subcommand("analyze", "Evaluate the analytic model");
    analyze->require_subcommand(1);
    auto common = [&](CLI::App* sub) {
        sub->add_option("--l", aa.l, "Stream parameter l (list or a..b range)");
        sub->add_option("--eps", aa.eps, "Erasure probability (list or a..b:step range)");
        sub->add_option("--rate", aa.rate, "Code rate (l-1)/l, alternative to --l");
        sub->add_option("--seed", aa.out.seed, "Seed recorded in the output header");
        sub->add_option("--out", aa.out.csv, "CSV output path (default stdout)");
        sub->add_option("--json", aa.out.json, "JSON mirror output path");
    };
    auto* busy = analyze->add_subcommand("busy", "Busy-time moments and delay bound");
    auto* pmf = analyze->add_subcommand("pmf", "Busy-time distribution");
    auto* cost = analyze->add_subcommand("cost", "Decoder arithmetic per information packet");
    auto* group = analyze->add_subcommand("group", "Group-code delay per slot");
    auto* group_pmf = analyze->add_subcommand("group-pmf", "Group-code busy-time distribution");
    auto* failure = analyze->add_subcommand("failure", "Decoding-failure bounds");
    auto* rank = analyze->add_subcommand("rank", "Full-rank probability bounds");
    auto* throughput = analyze->add_subcommand("throughput", "Good-throughput tail bound");
    for (auto* sub : {busy, pmf, cost, group, group_pmf, failure, throughput}) {
        common(sub);
    }
    group->add_option("--c", aa.c, "Coded packets per interval");
    group_pmf->add_option("--lg", aa.lg, "Interval length");
    group_pmf->add_option("--c", aa.c, "Coded packets per interval");
    failure->add_option("--q", aa.q, "Field size Q");
    failure->add_option("--kmax", aa.k_max, "Also enumerate busy periods up to this length");
    rank->add_option("--k", aa.k, "Matrix size");
    rank->add_option("--q", aa.q, "Field size Q");
    rank->add_option("--seed", aa.out.seed, "Seed recorded in the output header");
    rank->add_option("--out", aa.out.csv, "CSV output path (default stdout)");
    rank->add_option("--json", aa.out.json, "JSON mirror output path");
    throughput->add_option("--n", aa.n_slots, "Stream length in slots");
    throughput->add_option("--r0", aa.r0, "Throughput threshold");

    FileArgs sa;
    auto* simulate = app.add_subcommand("simulate", "Run a scenario file");
    FileArgs ca;
    auto* compare = app.add_subcommand("compare", "Stream vs block vs group codes at matched rates");
    for (auto [sub, args] : {std::pair{simulate, &sa}, std::pair{compare, &ca}}) {
        sub->add_option("scenario", args->file, "Scenario JSON file")->required();
        sub->add_option("--seed", args->seed, "Replace the scenario seeds with this seed");
        sub->add_option("--reps", args->reps, "Replications");
        sub->add_option("--slot-ms", args->slot_ms, "Slot duration for a millisecond delay column");
        sub->add_option("--out", args->out.csv, "CSV output path (default stdout)");
        sub->add_option("--json", args->out.json, "JSON mirror output path");
    }

    std::string only;
    auto* validate = app.add_subcommand("validate", "Run the acceptance checks");
    validate->add_option("--only", only, "Check ids to run (list or a..b range)");

    CLI11_PARSE(app, argc, argv);
    try {
        if (analyze->parsed()) {
            const std::pair<CLI::App*, Table (*)(const AnalyzeArgs&)> handlers[] = {
                {busy, analyze_busy},   {pmf, analyze_pmf},         {cost, analyze_cost},
                {group, analyze_group}, {group_pmf, analyze_group_pmf}, {failure, analyze_failure},
                {rank, analyze_rank},   {throughput, analyze_throughput}};
            for (const auto& [sub, fn] : handlers) {
                if (sub->parsed()) {
                    emit(fn(aa), aa.out);
                }
            }
        } else if (simulate->parsed()) {
            cmd_simulate(sa);
        } else if (compare->parsed()) {
            cmd_compare(ca);
        } else if (validate->parsed()) {
            return cmd_validate(only);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
