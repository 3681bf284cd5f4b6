#include "ivstab/problem.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ivstab {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw MalformedInput(where + ": " + what);
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(where, "non-finite number");
    return v;
}

CoefSpec coef_spec(const json& j, const std::string& where) {
    CoefSpec c;
    if (j.is_number()) {
        c.lo = c.hi = number(j, where);
    } else if (j.is_array()) {
        if (j.size() != 2) fail(where, "interval must be [lo, hi]");
        c.lo = number(j[0], where + "[0]");
        c.hi = number(j[1], where + "[1]");
        if (c.lo > c.hi) {
            std::ostringstream os;
            os << "lo > hi (" << c.lo << " > " << c.hi << ")";
            fail(where, os.str());
        }
    } else if (j.is_object()) {
        for (const auto& [k, v] : j.items())
            if (k != "center" && k != "scale") fail(where, "unknown key '" + k + "'");
        if (!j.contains("center") || !j.contains("scale")) fail(where, "template needs 'center' and 'scale'");
        c.templated = true;
        c.center = number(j["center"], where + ".center");
        c.scale = number(j["scale"], where + ".scale");
        c.lo = c.hi = c.center;
    } else {
        fail(where, "expected a number, [lo, hi] or {\"center\", \"scale\"}");
    }
    return c;
}

EntrySpec entry_spec(const json& j, const std::string& where) {
    if (!j.is_array()) return {coef_spec(j, where)};
    if (j.empty()) fail(where, "empty coefficient list");
    EntrySpec e;
    for (std::size_t k = 0; k < j.size(); ++k) e.push_back(coef_spec(j[k], where + "[" + std::to_string(k) + "]"));
    return e;
}

Polynomial polynomial(const json& j, const std::string& where) {
    if (j.is_number()) return Polynomial::constant(number(j, where));
    if (!j.is_array() || j.empty()) fail(where, "expected a coefficient array");
    std::vector<double> c;
    for (std::size_t k = 0; k < j.size(); ++k) c.push_back(number(j[k], where + "[" + std::to_string(k) + "]"));
    return Polynomial(std::move(c));
}

template <class T, class F>
SquareMatrix<T> matrix(const json& j, std::size_t n, const std::string& where, F&& element) {
    if (!j.is_array() || j.size() != n) fail(where, "expected " + std::to_string(n) + " rows");
    SquareMatrix<T> m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string row = where + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != n) fail(row, "expected " + std::to_string(n) + " entries");
        for (std::size_t k = 0; k < n; ++k) m(i, k) = element(j[i][k], row + "[" + std::to_string(k) + "]");
    }
    return m;
}

PolynomialMatrix fixed_matrix(const json& root, const char* key, std::size_t n) {
    if (!root.contains(key) || (root[key].is_string() && root[key] == "identity")) {
        return identity_polynomial_matrix(n);
    }
    if (root[key].is_string()) fail(key, "the only string value allowed is \"identity\"");
    return matrix<Polynomial>(root[key], n, key, polynomial);
}

json coef_json(const CoefSpec& c) {
    if (c.templated) return json{{"center", c.center}, {"scale", c.scale}};
    if (c.lo == c.hi) return c.lo;
    return json::array({c.lo, c.hi});
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedInput(path + ": cannot open file");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

Interval CoefSpec::at(double eps) const {
    if (!templated) return {lo, hi};
    const double a = center - scale * eps;
    const double b = center + scale * eps;
    return {std::min(a, b), std::max(a, b)};
}

bool ProblemSpec::has_template() const {
    for (const auto* M : {&B, &D})
        for (const auto& e : M->entries())
            for (const auto& c : e)
                if (c.templated) return true;
    return false;
}

Problem ProblemSpec::instantiate(double e) const {
    if (!(e >= 0.0) || !std::isfinite(e)) throw DomainError("eps must be a finite nonnegative number");
    auto box = [&](const SquareMatrix<EntrySpec>& M, const char* tag) {
        IntervalPolynomialMatrix out(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                std::vector<Interval> b;
                for (const auto& c : M(i, j)) b.push_back(c.at(e));
                try {
                    out(i, j) = IntervalPolynomial(std::move(b));
                } catch (const MalformedInput& err) {
                    throw MalformedInput(std::string(tag) + "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                         "): " + err.what());
                }
            }
        return out;
    };
    Problem p{box(B, "B"), A, box(D, "D"), C};
    p.validate();
    return p;
}

ProblemSpec parse_problem(const std::string& text, const std::string& source) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // Convert the byte offset into line:column.
        std::size_t line = 1, col = 1;
        for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw MalformedInput(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON (" +
                             e.what() + ")");
    }
    try {
        if (!root.is_object()) fail("<root>", "expected an object");
        static const std::vector<std::string> known{"schema", "name", "note", "n", "A", "C",
                                                    "B", "D", "eps", "checks", "settings"};
        for (const auto& [k, v] : root.items())
            if (std::find(known.begin(), known.end(), k) == known.end()) fail(k, "unknown key");

        ProblemSpec spec;
        if (root.contains("schema")) {
            if (!root["schema"].is_number_integer() || root["schema"].get<int>() != 1)
                fail("schema", "unsupported schema version (expected 1)");
        }
        if (root.contains("name")) {
            if (!root["name"].is_string()) fail("name", "expected a string");
            spec.name = root["name"].get<std::string>();
        }
        if (root.contains("note")) {
            if (!root["note"].is_string()) fail("note", "expected a string");
            spec.note = root["note"].get<std::string>();
        }
        if (!root.contains("B")) fail("B", "missing");
        if (!root.contains("D")) fail("D", "missing");
        if (root.contains("n")) {
            if (!root["n"].is_number_integer() || root["n"].get<long long>() < 1) fail("n", "expected a positive integer");
            spec.n = root["n"].get<std::size_t>();
        } else {
            if (!root["B"].is_array() || root["B"].empty()) fail("B", "expected a non-empty matrix");
            spec.n = root["B"].size();
        }
        if (spec.n > kMaxSymbolicDetOrder) fail("n", "order above " + std::to_string(kMaxSymbolicDetOrder));
        spec.A = fixed_matrix(root, "A", spec.n);
        spec.C = fixed_matrix(root, "C", spec.n);
        spec.B = matrix<EntrySpec>(root["B"], spec.n, "B", entry_spec);
        spec.D = matrix<EntrySpec>(root["D"], spec.n, "D", entry_spec);
        if (root.contains("eps")) {
            spec.eps = number(root["eps"], "eps");
            if (spec.eps < 0) fail("eps", "must be nonnegative");
        }
        if (root.contains("checks")) {
            const json& c = root["checks"];
            if (!c.is_object()) fail("checks", "expected an object");
            for (const auto& [k, v] : c.items()) {
                if (k == "hinf") spec.hinf = true;
                else if (k == "spr") spec.spr = true;
                else if (k == "sector") {
                    if (!v.is_object() || !v.contains("K")) fail("checks.sector", "expected {\"K\": [[...]], \"eta\": x}");
                    SectorBlock s;
                    s.K = matrix<double>(v["K"], spec.n, "checks.sector.K", number);
                    if (v.contains("eta")) s.eta = number(v["eta"], "checks.sector.eta");
                    spec.sector = std::move(s);
                } else {
                    fail("checks." + k, "unknown check");
                }
            }
        }
        if (root.contains("settings")) {
            if (!root["settings"].is_object()) fail("settings", "expected an object");
            spec.settings = root["settings"];
        }
        (void)spec.instantiate(spec.eps);
        return spec;
    } catch (const MalformedInput& e) {
        throw MalformedInput(source + ": " + e.what());
    }
}

ProblemSpec load_problem(const std::string& path) {
    if (!path.empty() && path[0] == '@') {
        const std::string name = path.substr(1);
        std::string file;
        if (name == "manipulator") file = "manipulator.json";
        else if (name == "manipulator-theta") file = "manipulator_theta.json";
        else throw MalformedInput("unknown bundled fixture '" + path + "'");
        return parse_problem(read_file(std::string(IVSTAB_DATA_DIR) + "/" + file), path);
    }
    return parse_problem(read_file(path), path);
}

std::vector<std::string> bundled_fixtures() { return {"@manipulator", "@manipulator-theta"}; }

json polynomial_json(const Polynomial& p) { return p.vec(); }

json polynomial_matrix_json(const PolynomialMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.n(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.n(); ++j) row.push_back(polynomial_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json interval_polynomial_json(const IntervalPolynomial& p) {
    json out = json::array();
    for (const auto& b : p.bounds()) out.push_back(json::array({b.lo, b.hi}));
    return out;
}

json to_json(const ProblemSpec& spec) {
    json j = json::object();
    j["schema"] = spec.schema;
    if (!spec.name.empty()) j["name"] = spec.name;
    if (!spec.note.empty()) j["note"] = spec.note;
    j["n"] = spec.n;
    j["A"] = polynomial_matrix_json(spec.A);
    j["C"] = polynomial_matrix_json(spec.C);
    for (const auto& [key, M] : {std::pair{"B", &spec.B}, std::pair{"D", &spec.D}}) {
        json rows = json::array();
        for (std::size_t r = 0; r < spec.n; ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < spec.n; ++c) {
                json e = json::array();
                for (const auto& cs : (*M)(r, c)) e.push_back(coef_json(cs));
                row.push_back(std::move(e));
            }
            rows.push_back(std::move(row));
        }
        j[key] = std::move(rows);
    }
    j["eps"] = spec.eps;
    if (spec.hinf || spec.spr || spec.sector) {
        json c = json::object();
        if (spec.hinf) c["hinf"] = json::object();
        if (spec.spr) c["spr"] = json::object();
        if (spec.sector) {
            json K = json::array();
            for (std::size_t r = 0; r < spec.n; ++r) {
                json row = json::array();
                for (std::size_t k = 0; k < spec.n; ++k) row.push_back(spec.sector->K(r, k));
                K.push_back(std::move(row));
            }
            c["sector"] = {{"K", K}, {"eta", spec.sector->eta}};
        }
        j["checks"] = std::move(c);
    }
    if (!spec.settings.empty()) j["settings"] = spec.settings;
    return j;
}

std::string serialize(const ProblemSpec& spec) { return to_json(spec).dump(2) + "\n"; }

}  // namespace ivstab
