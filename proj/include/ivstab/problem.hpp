#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ivstab/engine.hpp"

namespace ivstab {

/// One coefficient of an uncertain entry: a fixed interval, or center ± scale·ε.
struct CoefSpec {
    double lo = 0.0;
    double hi = 0.0;
    bool templated = false;
    double center = 0.0;
    double scale = 0.0;

    [[nodiscard]] Interval at(double eps) const;
    friend bool operator==(const CoefSpec&, const CoefSpec&) = default;
};

using EntrySpec = std::vector<CoefSpec>;

struct SectorBlock {
    RealMatrix K;
    double eta = 0.0;
};

struct ProblemSpec {
    int schema = 1;
    std::string name;
    std::string note;
    std::size_t n = 0;
    PolynomialMatrix A;
    PolynomialMatrix C;
    SquareMatrix<EntrySpec> B;
    SquareMatrix<EntrySpec> D;
    /// ε used when none is given on the command line.
    double eps = 0.0;
    bool hinf = false;
    bool spr = false;
    std::optional<SectorBlock> sector;
    nlohmann::json settings = nlohmann::json::object();

    [[nodiscard]] bool has_template() const;
    /// Throws DomainError for ε < 0 and MalformedInput when a bound pair inverts.
    [[nodiscard]] Problem instantiate(double eps) const;
    [[nodiscard]] Problem instantiate() const { return instantiate(eps); }
};

/// Throws MalformedInput naming the offending field (or the JSON parse position).
[[nodiscard]] ProblemSpec parse_problem(const std::string& text, const std::string& source = "<input>");
/// A path, or "@name" for a bundled fixture.
[[nodiscard]] ProblemSpec load_problem(const std::string& path_or_fixture);
[[nodiscard]] std::vector<std::string> bundled_fixtures();

[[nodiscard]] nlohmann::json to_json(const ProblemSpec& spec);
[[nodiscard]] std::string serialize(const ProblemSpec& spec);

[[nodiscard]] nlohmann::json polynomial_json(const Polynomial& p);
[[nodiscard]] nlohmann::json polynomial_matrix_json(const PolynomialMatrix& m);
[[nodiscard]] nlohmann::json interval_polynomial_json(const IntervalPolynomial& p);

}  // namespace ivstab
