#include "ivstab/report.hpp"

#include <cmath>
#include <sstream>

#include "ivstab/problem.hpp"

namespace ivstab {

using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string count_string(const ConfigCount& c) { return c.str(); }

json selection_json(const EntrySelection& s) {
    switch (s.kind) {
        case SelectionKind::vertex: return "K" + std::to_string(s.index);
        case SelectionKind::edge: {
            const auto [a, b] = kEdgePairs[s.index - 1];
            return "E(" + std::to_string(a) + "," + std::to_string(b) + ")";
        }
        case SelectionKind::unassigned: break;
    }
    return nullptr;
}

json witness_json(const Witness& w) {
    json j;
    j["lambda"] = w.lambda;
    j["omega"] = w.omega ? json(*w.omega) : json(nullptr);
    j["routh_reason"] = to_string(w.reason);
    j["determinant"] = polynomial_json(w.determinant);
    j["B"] = polynomial_matrix_json(w.B);
    j["D"] = polynomial_matrix_json(w.D);
    return j;
}

}  // namespace

json configuration_json(const EdgeConfiguration& c) {
    json j;
    j["origin"] = to_string(c.origin);
    j["pattern_id"] = c.pattern_id;
    j["pattern"] = c.describe_pattern();
    j["arity"] = c.arity();
    json edges = json::array();
    for (const auto& p : c.edge_positions) edges.push_back(to_string(p));
    j["edge_positions"] = std::move(edges);
    json sel = json::object();
    for (std::size_t k = 0; k < c.selections.size(); ++k) {
        if (c.selections[k].kind == SelectionKind::unassigned) continue;
        sel[to_string(position_at(k, c.n))] = selection_json(c.selections[k]);
    }
    if (!sel.empty()) j["selections"] = std::move(sel);
    return j;
}

json settings_json(const AnalysisOptions& o) {
    return {{"routh_tol", o.sweep.routh_tol},   {"hull_tol", o.sweep.hull_tol},
            {"freq_floor", o.sweep.freq_floor}, {"lambda_floor", o.sweep.lambda_floor},
            {"max_items", o.sweep.max_items},   {"max_arity", o.sweep.max_arity},
            {"grid_steps", o.grid_steps},       {"max_configs", o.max_configs},
            {"seed", o.seed},                   {"table_cap", o.table_cap}};
}

json analysis_json(const AnalysisReport& r) {
    json j;
    j["method"] = r.method;
    j["verdict"] = to_string(r.verdict);
    j["patterns"] = {{"raw", r.raw_patterns},
                     {"collapsed", r.collapsed_patterns},
                     {"edge_sets", r.patterns},
                     {"max_arity", r.max_arity},
                     {"formula_count", count_string(r.formula_count)}};
    j["counts"] = {{"families", count_string(r.families_total)},
                   {"checked", r.checked},
                   {"stable", r.stable},
                   {"unstable", r.unstable},
                   {"inconclusive", r.inconclusive},
                   {"grid_only", r.grid_only}};
    j["subsampled"] = r.subsampled;
    j["degree_check"] = {{"ok", r.degree.ok},
                         {"degree", r.degree.degree},
                         {"checked", r.degree.checked},
                         {"subsampled", r.degree.subsampled}};
    if (!r.degree.evidence.empty()) j["degree_check"]["evidence"] = r.degree.evidence;
    if (r.aborted) j["abort_reason"] = r.abort_reason;
    j["sweep"] = {{"omega_evaluations", r.omega_evaluations},
                  {"min_certified_distance", number_or_null(r.min_certified_distance)}};
    if (r.first_witness) {
        const auto& fw = *r.first_witness;
        json w = witness_json(fw.witness);
        w["configuration"] = configuration_json(fw.config);
        w["family"] = fw.pattern;
        w["family_index"] = fw.family_index;
        j["witness"] = std::move(w);
    } else {
        j["witness"] = nullptr;
    }
    j["settings"] = settings_json(r.settings);
    j["runtime"] = {{"wall_ms", r.wall_ms}, {"jobs", r.settings.jobs}};
    return j;
}

json oracle_json(const OracleResult& r, const OracleOptions& o) {
    json j;
    j["found"] = r.found;
    j["vertices_tested"] = r.vertices_tested;
    j["vertices_exhausted"] = r.vertices_exhausted;
    j["samples_tested"] = r.samples_tested;
    if (r.found) {
        j["witness"] = {{"source", r.source},
                        {"index", r.index},
                        {"routh_reason", to_string(r.reason)},
                        {"determinant", polynomial_json(r.determinant)},
                        {"B", polynomial_matrix_json(r.B)},
                        {"D", polynomial_matrix_json(r.D)}};
    } else {
        j["witness"] = nullptr;
    }
    j["settings"] = {{"samples", o.samples}, {"seed", o.seed}, {"vertex_budget", o.vertex_budget},
                     {"routh_tol", o.routh_tol}};
    return j;
}

json freq_json(const FreqReport& r, const FreqOptions& o) {
    json j;
    j["check"] = r.check;
    j["method"] = r.method;
    j["status"] = to_string(r.status);
    j["worst_value"] = r.status == CheckStatus::precondition_failed ? json(nullptr) : number_or_null(r.worst_value);
    j["families"] = r.families;
    j["members"] = r.members;
    j["evaluations"] = r.evaluations;
    j["note"] = r.note;
    if (r.worst) {
        j["worst"] = {{"lambda", r.worst->lambda},
                      {"omega", number_or_null(r.worst->omega)},
                      {"value", r.worst->value},
                      {"configuration", configuration_json(r.worst->config)},
                      {"B", polynomial_matrix_json(r.worst->B)},
                      {"D", polynomial_matrix_json(r.worst->D)}};
        if (std::isinf(r.worst->omega)) j["worst"]["omega"] = "inf";
    }
    j["settings"] = {{"tol", o.tol},
                     {"points_per_decade", o.points_per_decade},
                     {"decades", o.decades},
                     {"lambda_interior", o.lambda_interior}};
    return j;
}

json margin_json(const MarginResult& r) {
    json trace = json::array();
    for (const auto& s : r.trace) trace.push_back({{"eps", s.eps}, {"verdict", to_string(s.verdict)}});
    return {{"eps_stable", r.eps_stable}, {"eps_unstable", r.eps_unstable}, {"trace", trace}};
}

json strip_runtime(json j) {
    if (j.is_object()) {
        j.erase("runtime");
        for (auto& [k, v] : j.items()) v = strip_runtime(v);
    } else if (j.is_array()) {
        for (auto& v : j) v = strip_runtime(v);
    }
    return j;
}

std::string analysis_table(const AnalysisReport& r) {
    std::ostringstream os;
    os << "method           " << r.method << "\n"
       << "verdict          " << to_string(r.verdict) << "\n"
       << "patterns         " << r.raw_patterns << " raw, " << r.collapsed_patterns << " collapsed, arity "
       << r.max_arity << "\n"
       << "formula count    " << r.formula_count << "\n"
       << "families         " << r.families_total << " (checked " << r.checked << ": " << r.stable << " stable, "
       << r.unstable << " unstable, " << r.inconclusive << " inconclusive)\n"
       << "det degree       " << r.degree.degree << (r.degree.ok ? "" : " (degree drop)") << "\n";
    if (r.aborted) os << "aborted          " << r.abort_reason << "\n";
    if (r.first_witness) {
        const auto& w = r.first_witness->witness;
        os << "witness          " << r.first_witness->pattern << " lambda = [";
        for (std::size_t k = 0; k < w.lambda.size(); ++k) os << (k ? ", " : "") << w.lambda[k];
        os << "], " << to_string(w.reason) << "\n"
           << "  det            " << w.determinant.to_string() << "\n";
    }
    return os.str();
}

}  // namespace ivstab
