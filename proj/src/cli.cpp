#include "ivstab/cli.hpp"

#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "ivstab/freqdom.hpp"
#include "ivstab/problem.hpp"
#include "ivstab/report.hpp"

namespace ivstab {

using nlohmann::json;

namespace {

struct Flags {
    std::string problem;
    std::string method = "thm1_row";
    std::optional<double> eps;
    std::string eps_range = "0:1";
    double width = 1e-4;
    double tol = kDefaultRouthTol;
    unsigned grid_steps = 0;
    double freq_floor = 1e-6;
    std::uint64_t max_configs = 0;
    std::uint64_t samples = 10'000;
    std::uint64_t seed = 0;
    std::string format = "json";
    unsigned jobs = 1;
    std::string check;
    std::string entry;
    std::string lemma2;
    std::size_t row = 1;
    bool families = false;
};

int verdict_code(Verdict v) {
    switch (v) {
        case Verdict::stable: return kExitStable;
        case Verdict::unstable: return kExitUnstable;
        case Verdict::inconclusive: return kExitInconclusive;
    }
    return kExitFailure;
}

int status_code(CheckStatus s) {
    switch (s) {
        case CheckStatus::holds: return kExitStable;
        case CheckStatus::violated: return kExitUnstable;
        case CheckStatus::inconclusive: return kExitInconclusive;
        case CheckStatus::precondition_failed: return kExitFailure;
    }
    return kExitFailure;
}

// Settings in the problem file act as defaults for flags not given on the command line.
void apply_settings(const ProblemSpec& spec, Flags& f, const CLI::App& cmd) {
    const json& s = spec.settings;
    auto given = [&](const char* flag) { return cmd.get_option_no_throw(flag) && cmd.count(flag) > 0; };
    auto take = [&](const char* key, const char* flag, auto& dst) {
        if (!s.contains(key) || given(flag)) return;
        try {
            dst = s[key].get<std::remove_reference_t<decltype(dst)>>();
        } catch (const json::exception&) {
            throw MalformedInput(std::string("settings.") + key + ": wrong type");
        }
    };
    take("method", "--method", f.method);
    take("tol", "--tol", f.tol);
    take("grid_steps", "--grid-steps", f.grid_steps);
    take("freq_floor", "--freq-floor", f.freq_floor);
    take("max_configs", "--max-configs", f.max_configs);
    take("samples", "--samples", f.samples);
    take("seed", "--seed", f.seed);
    if (!f.eps) f.eps = spec.eps;
}

AnalysisOptions analysis_options(const Flags& f) {
    AnalysisOptions o;
    o.sweep.routh_tol = f.tol;
    o.sweep.freq_floor = f.freq_floor;
    o.grid_steps = f.grid_steps;
    o.max_configs = f.max_configs;
    o.seed = f.seed;
    o.jobs = std::max(1u, f.jobs);
    return o;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

std::size_t free_positions(const Problem& p) {
    std::size_t k = 0;
    for (const auto* M : {&p.B, &p.D})
        for (const auto& e : M->entries())
            if (!is_degenerate(e).full_point) ++k;
    return k;
}

json count_block(const Problem& p, const std::vector<EdgeConfiguration>& skeletons) {
    ConfigStream stream(skeletons, EnumerationMode::patterns_only);
    const CollapseResult c = collapse_degenerate(stream, p.B, p.D);
    json edge_sets = json::array();
    std::size_t arity = 0;
    for (const auto& cp : c.patterns) {
        std::string s = "{";
        for (std::size_t k = 0; k < cp.edge_positions.size(); ++k) s += (k ? "," : "") + to_string(cp.edge_positions[k]);
        edge_sets.push_back(s + "}");
        arity = std::max(arity, cp.edge_positions.size());
    }
    return {{"skeletons", skeletons.size()},
            {"raw_patterns", c.raw_patterns},
            {"distinct_patterns", c.distinct_patterns},
            {"collapsed_patterns", c.patterns.size()},
            {"edge_sets", edge_sets},
            {"max_arity", arity},
            {"full_count", c.full_count.str()},
            {"full_count_expr", std::to_string(c.patterns.size()) + "*4^" + std::to_string(free_positions(p))},
            {"distinct_families", c.distinct_families.str()}};
}

int cmd_count(const ProblemSpec& spec, const Flags& f, std::ostream& out) {
    const Problem p = spec.instantiate(*f.eps);
    const std::size_t n = p.n();
    const CountFormulas cf = count_formulas(n);
    json j;
    j["n"] = n;
    j["eps"] = *f.eps;
    j["formulas"] = {{"prop1", cf.prop1.str()},
                     {"thm1", cf.thm1.str()},
                     {"prop1_patterns", cf.prop1_patterns.str()},
                     {"thm1_patterns", cf.thm1_patterns.str()}};
    for (Method m : {Method::prop1, Method::thm1_row, Method::thm1_column})
        j["methods"][to_string(m)] = count_block(p, method_patterns(m, n));
    if (f.format == "table") {
        out << "n = " << n << "\n"
            << "formula prop1 = " << cf.prop1 << ", thm1 = " << cf.thm1 << "\n";
        out << std::left << std::setw(13) << "method" << std::setw(10) << "patterns" << std::setw(11) << "collapsed"
            << std::setw(7) << "arity" << std::setw(16) << "full count" << "families\n";
        for (Method m : {Method::prop1, Method::thm1_row, Method::thm1_column}) {
            const json& b = j["methods"][to_string(m)];
            out << std::setw(13) << to_string(m) << std::setw(10) << b["raw_patterns"].get<std::size_t>() << std::setw(11)
                << b["collapsed_patterns"].get<std::size_t>() << std::setw(7) << b["max_arity"].get<std::size_t>()
                << std::setw(16) << b["full_count_expr"].get<std::string>() << b["distinct_families"].get<std::string>()
                << "\n";
        }
    } else {
        emit(out, j);
    }
    return kExitStable;
}

std::vector<EdgeConfiguration> skeletons_for(const Flags& f, std::size_t n) {
    if (f.lemma2.empty()) return method_patterns(parse_method(f.method), n);
    if (f.row < 1 || f.row > n) throw DomainError("--row must be in 1.." + std::to_string(n));
    if (f.lemma2 == "N") return lemma2_patterns(n, f.row, Lemma2Set::N);
    if (f.lemma2 == "NE") return lemma2_patterns(n, f.row, Lemma2Set::N_E);
    throw DomainError("--lemma2 must be N or NE");
}

int cmd_analyze(const ProblemSpec& spec, const Flags& f, std::ostream& out) {
    const Problem p = spec.instantiate(*f.eps);
    const std::string tag = f.lemma2.empty() ? f.method : "lemma2_" + f.lemma2 + "_row" + std::to_string(f.row);
    if (f.lemma2.empty()) (void)parse_method(f.method);
    const AnalysisReport r = analyze_patterns(p, skeletons_for(f, p.n()), tag, analysis_options(f));
    if (f.format == "table") {
        out << analysis_table(r);
    } else {
        json j = analysis_json(r);
        j["problem"] = spec.name;
        j["eps"] = *f.eps;
        emit(out, j);
    }
    return verdict_code(r.verdict);
}

int cmd_margin(const ProblemSpec& spec, const Flags& f, std::ostream& out, const std::vector<std::string>& args) {
    if (!spec.has_template()) throw DomainError("margin needs eps-templated coefficients ({\"center\", \"scale\"})");
    const auto colon = f.eps_range.find(':');
    if (colon == std::string::npos) throw DomainError("--eps-range must be lo:hi");
    double lo = 0, hi = 0;
    try {
        lo = std::stod(f.eps_range.substr(0, colon));
        hi = std::stod(f.eps_range.substr(colon + 1));
    } catch (const std::exception&) {
        throw DomainError("--eps-range must be lo:hi");
    }
    const Method m = parse_method(f.method);
    const MarginResult r = robust_margin([&](double e) { return spec.instantiate(e); }, lo, hi, m, f.width,
                                         analysis_options(f));
    json j = margin_json(r);
    j["problem"] = spec.name;
    j["method"] = to_string(m);
    j["width"] = f.width;
    j["settings"] = settings_json(analysis_options(f));
    std::string cmdline;
    for (const auto& a : args) cmdline += (cmdline.empty() ? "" : " ") + a;
    j["runtime"]["command"] = cmdline;
    if (f.format == "table") {
        out << std::setprecision(10) << "eps* in [" << r.eps_stable << ", " << r.eps_unstable << "] (" << to_string(m)
            << ", " << r.trace.size() << " analyses)\n";
    } else {
        emit(out, j);
    }
    return kExitStable;
}

int cmd_oracle(const ProblemSpec& spec, const Flags& f, std::ostream& out) {
    const Problem p = spec.instantiate(*f.eps);
    OracleOptions o;
    o.samples = f.samples;
    o.seed = f.seed;
    o.routh_tol = f.tol;
    const OracleResult r = oracle_falsify(p, o);
    if (f.format == "table") {
        out << (r.found ? "witness found (" + r.source + " #" + std::to_string(r.index) + ")" : "none found") << "; "
            << r.vertices_tested << " vertex combinations, " << r.samples_tested << " samples\n";
        if (r.found) out << "det = " << r.determinant.to_string() << " (" << to_string(r.reason) << ")\n";
    } else {
        json j = oracle_json(r, o);
        j["eps"] = *f.eps;
        emit(out, j);
    }
    return r.found ? kExitUnstable : kExitStable;
}

int cmd_kharitonov(const ProblemSpec& spec, const Flags& f, std::ostream& out) {
    const Problem p = spec.instantiate(*f.eps);
    const std::size_t n = p.n();
    json entries = json::object();
    std::string wanted = f.entry;
    std::erase_if(wanted, [](char c) { return c == ' ' || c == '(' || c == ')' || c == ','; });
    bool matched = false;
    for (std::size_t k = 0; k < 2 * n * n; ++k) {
        const Position pos = position_at(k, n);
        std::string key = to_string(pos);
        std::string compact = key;
        std::erase_if(compact, [](char c) { return c == '(' || c == ')' || c == ','; });
        if (!wanted.empty() && wanted != compact) continue;
        matched = true;
        const IntervalPolynomial& ip = pos.side == Side::B ? p.B(pos.row, pos.col) : p.D(pos.row, pos.col);
        json e;
        e["bounds"] = interval_polynomial_json(ip);
        e["full_point"] = is_degenerate(ip).full_point;
        json verts = json::array();
        for (const auto& v : kharitonov_vertices(ip)) verts.push_back(polynomial_json(v));
        e["vertices"] = verts;
        json edges = json::array();
        for (const auto& s : kharitonov_edges(ip))
            edges.push_back({{"pair", {s.from_index, s.to_index}},
                             {"from", polynomial_json(s.from)},
                             {"to", polynomial_json(s.to)},
                             {"degenerate", s.degenerate()}});
        e["edges"] = edges;
        if (f.format == "table") {
            out << key << "\n";
            const auto vs = kharitonov_vertices(ip);
            for (int v = 0; v < 4; ++v) out << "  K" << v + 1 << " = " << vs[v].to_string() << "\n";
        }
        entries[key] = std::move(e);
    }
    if (!matched) throw DomainError("no entry named '" + f.entry + "' (use e.g. D11 or \"D(1,1)\")");
    if (f.format != "table") emit(out, {{"eps", *f.eps}, {"entries", entries}});
    return kExitStable;
}

int cmd_enumerate(const ProblemSpec& spec, const Flags& f, std::ostream& out) {
    const Problem p = spec.instantiate(*f.eps);
    const std::size_t n = p.n();
    const auto skeletons = skeletons_for(f, n);
    json j;
    j["n"] = n;
    j["source"] = f.lemma2.empty() ? f.method : "lemma2_" + f.lemma2;
    json sk = json::array();
    for (const auto& s : skeletons) sk.push_back(configuration_json(s));
    j["skeletons"] = sk;
    j["collapsed"] = count_block(p, skeletons);
    if (f.families) {
        const std::uint64_t cap = f.max_configs ? f.max_configs : 1000;
        json fams = json::array();
        std::uint64_t total = for_each_family(p, skeletons, [&](const ParamFamily& fam, std::uint64_t k) {
            if (k >= cap) return false;
            fams.push_back(configuration_json(fam.config));
            return true;
        });
        j["families"] = fams;
        j["families_listed"] = std::min<std::uint64_t>(total, cap);
    }
    if (f.format == "table") {
        for (const auto& s : skeletons) out << s.describe_pattern() << "\n";
        out << j["collapsed"]["collapsed_patterns"].get<std::size_t>() << " collapsed patterns:";
        for (const auto& e : j["collapsed"]["edge_sets"]) out << " " << e.get<std::string>();
        out << "\n";
    } else {
        emit(out, j);
    }
    return kExitStable;
}

int cmd_freq(const ProblemSpec& spec, const Flags& f, std::ostream& out) {
    const Problem p = spec.instantiate(*f.eps);
    const Method m = parse_method(f.method);
    FreqOptions o;
    o.tol = f.tol;
    std::vector<std::string> checks;
    if (!f.check.empty()) checks.push_back(f.check);
    else {
        if (spec.hinf) checks.push_back("hinf");
        if (spec.spr) checks.push_back("spr");
        if (spec.sector) checks.push_back("sector");
    }
    if (checks.empty()) throw DomainError("no check selected: pass --check hinf|spr|sector or add a checks block");
    json results = json::array();
    int code = kExitStable;
    for (const auto& c : checks) {
        FreqReport r;
        if (c == "hinf") r = hinf_lt_one(p, m, o);
        else if (c == "spr") r = spr_check(p, m, o);
        else if (c == "sector") {
            if (!spec.sector) throw DomainError("sector check needs checks.sector in the problem file");
            r = sector_positivity(p, SectorSpec(spec.sector->K, spec.sector->eta), m, o);
        } else {
            throw DomainError("unknown check '" + c + "'");
        }
        const int rc = status_code(r.status);
        if (rc == kExitFailure || code == kExitFailure) code = kExitFailure;
        else code = std::max(code, rc == kExitInconclusive && code == kExitUnstable ? code : rc);
        if (f.format == "table") {
            out << std::left << std::setw(8) << r.check << to_string(r.status) << "  worst " << r.worst_value;
            if (r.worst) out << " at omega " << r.worst->omega;
            out << "\n";
        }
        results.push_back(freq_json(r, o));
    }
    if (f.format != "table") emit(out, {{"eps", *f.eps}, {"checks", results}});
    return code;
}

int cmd_example(const Flags& f, std::ostream& out) {
    const ProblemSpec spec = load_problem("@manipulator");
    const double eps = f.eps ? *f.eps : spec.eps;
    const Problem p = spec.instantiate(eps);
    AnalysisOptions o = analysis_options(f);
    json rows = json::array();
    Verdict overall = Verdict::stable;
    std::ostringstream table;
    table << "two-link manipulator, eps = " << eps << "\n"
          << std::left << std::setw(13) << "method" << std::setw(10) << "patterns" << std::setw(11) << "collapsed"
          << std::setw(7) << "arity" << std::setw(12) << "count" << std::setw(10) << "families" << std::setw(14)
          << "verdict" << "checked\n";
    for (Method m : {Method::prop1, Method::thm1_column, Method::thm1_row}) {
        const AnalysisReport r = analyze(p, m, o);
        overall = worst(overall, r.verdict);
        const std::string expr = std::to_string(r.collapsed_patterns) + "*4^" + std::to_string(free_positions(p));
        table << std::setw(13) << to_string(m) << std::setw(10) << r.raw_patterns << std::setw(11)
              << r.collapsed_patterns << std::setw(7) << r.max_arity << std::setw(12) << expr << std::setw(10)
              << r.families_total.str() << std::setw(14) << to_string(r.verdict) << r.checked << "\n";
        json j = analysis_json(r);
        j["count_expr"] = expr;
        rows.push_back(std::move(j));
    }
    if (f.format == "json") emit(out, {{"problem", spec.name}, {"eps", eps}, {"methods", rows}});
    else out << table.str();
    return verdict_code(overall);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Robust Hurwitz stability of interval polynomial matrix families", "ivstab"};
    app.require_subcommand(1);
    Flags f;

    auto add_common = [&](CLI::App* c, bool needs_problem) {
        if (needs_problem)
            c->add_option("problem", f.problem, "problem file, or @manipulator / @manipulator-theta")->required();
        c->add_option("--eps", f.eps, "uncertainty scale for templated coefficients")->check(CLI::NonNegativeNumber);
        c->add_option("--tol", f.tol, "relative Routh pivot tolerance")->check(CLI::PositiveNumber);
        c->add_option("--seed", f.seed, "random seed");
        c->add_option("--format", f.format, "output format")->check(CLI::IsMember({"json", "table"}));
    };
    const auto method_names = CLI::IsMember({"prop1", "thm1", "thm1_row", "thm1_column"});
    auto add_engine = [&](CLI::App* c) {
        c->add_option("--method", f.method, "prop1, thm1_row or thm1_column")->check(method_names);
        c->add_option("--grid-steps", f.grid_steps, "grid fallback steps for inconclusive families (0 = off)");
        c->add_option("--freq-floor", f.freq_floor, "smallest frequency interval, relative")->check(CLI::PositiveNumber);
        c->add_option("--max-configs", f.max_configs, "subsample at most this many families (0 = all)");
        c->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
    };

    auto* analyze_cmd = app.add_subcommand("analyze", "decide robust stability over a testing set");
    add_common(analyze_cmd, true);
    add_engine(analyze_cmd);
    analyze_cmd->add_option("--lemma2", f.lemma2, "use the row-expansion set N or NE instead of --method")
        ->check(CLI::IsMember({"N", "NE"}));
    analyze_cmd->add_option("--row", f.row, "row for --lemma2 (one-based)");

    auto* margin_cmd = app.add_subcommand("margin", "bisect the largest stable eps");
    add_common(margin_cmd, true);
    add_engine(margin_cmd);
    margin_cmd->add_option("--eps-range", f.eps_range, "bracket lo:hi");
    margin_cmd->add_option("--width", f.width, "final bracket width")->check(CLI::PositiveNumber);

    auto* count_cmd = app.add_subcommand("count", "count formulas and collapsed testing-set patterns");
    add_common(count_cmd, true);

    auto* enum_cmd = app.add_subcommand("enumerate", "list testing-set configurations");
    add_common(enum_cmd, true);
    enum_cmd->add_option("--method", f.method, "prop1, thm1_row or thm1_column")->check(method_names);
    enum_cmd->add_option("--lemma2", f.lemma2, "N or NE")->check(CLI::IsMember({"N", "NE"}));
    enum_cmd->add_option("--row", f.row, "row for --lemma2 (one-based)");
    enum_cmd->add_flag("--families", f.families, "also list canonical families");
    enum_cmd->add_option("--max-configs", f.max_configs, "families to list (default 1000)");

    auto* kh_cmd = app.add_subcommand("kharitonov", "print Kharitonov vertices and edges per entry");
    add_common(kh_cmd, true);
    kh_cmd->add_option("--entry", f.entry, "single entry, e.g. D11");

    auto* oracle_cmd = app.add_subcommand("oracle", "vertex exhaustion and random sampling falsification");
    add_common(oracle_cmd, true);
    oracle_cmd->add_option("--samples", f.samples, "random samples");

    auto* freq_cmd = app.add_subcommand("freq", "H-infinity, SPR and sector checks for G = B D^-1");
    add_common(freq_cmd, true);
    freq_cmd->add_option("--method", f.method, "prop1, thm1_row or thm1_column")->check(method_names);
    freq_cmd->add_option("--check", f.check, "hinf, spr or sector (default: checks in the file)")
        ->check(CLI::IsMember({"hinf", "spr", "sector"}));

    auto* example_cmd = app.add_subcommand("example", "run the bundled manipulator under all three methods");
    add_common(example_cmd, false);
    add_engine(example_cmd);
    f.format = "table";

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : kExitInputError;
    }
    if (!example_cmd->parsed() && !app.get_subcommands().front()->count("--format")) f.format = "json";

    try {
        if (example_cmd->parsed()) return cmd_example(f, out);
        const ProblemSpec spec = load_problem(f.problem);
        CLI::App* cmd = app.get_subcommands().front();
        apply_settings(spec, f, *cmd);
        if (count_cmd->parsed()) return cmd_count(spec, f, out);
        if (kh_cmd->parsed()) return cmd_kharitonov(spec, f, out);
        if (enum_cmd->parsed()) return cmd_enumerate(spec, f, out);
        if (oracle_cmd->parsed()) return cmd_oracle(spec, f, out);
        if (freq_cmd->parsed()) return cmd_freq(spec, f, out);
        if (margin_cmd->parsed()) return cmd_margin(spec, f, out, args);
        return cmd_analyze(spec, f, out);
    } catch (const MalformedInput& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const DimensionMismatch& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace ivstab
