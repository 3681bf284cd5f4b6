#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ivstab/polymatrix.hpp"
#include "ivstab/testing_sets.hpp"

namespace ivstab {

/// The uncertain family M(s) = B(s)A(s) + D(s)C(s) with interval B, D and fixed A, C.
struct Problem {
    IntervalPolynomialMatrix B;
    PolynomialMatrix A;
    IntervalPolynomialMatrix D;
    PolynomialMatrix C;

    [[nodiscard]] std::size_t n() const noexcept { return B.n(); }
    /// Throws DimensionMismatch unless all four matrices share one positive order.
    void validate() const;
};

enum class Method { prop1, thm1_row, thm1_column };
[[nodiscard]] const char* to_string(Method m) noexcept;
/// Throws DomainError for unknown names.
[[nodiscard]] Method parse_method(const std::string& name);
[[nodiscard]] std::vector<EdgeConfiguration> method_patterns(Method m, std::size_t n);

enum class Verdict { stable, unstable, inconclusive };
[[nodiscard]] const char* to_string(Verdict v) noexcept;
/// unstable > inconclusive > stable
[[nodiscard]] Verdict worst(Verdict a, Verdict b) noexcept;

struct EdgeSlot {
    Position pos;
    Polynomial from;
    Polynomial to;
};

/// A λ-parametrized member family: vertex polynomials everywhere except the
/// edge slots, where entry e is λ_e·from + (1−λ_e)·to.
struct ParamFamily {
    EdgeConfiguration config;
    PolynomialMatrix A, C;
    PolynomialMatrix B, D;  ///< vertex assignment; edge slots are overwritten on instantiation
    std::vector<EdgeSlot> edges;

    [[nodiscard]] std::size_t arity() const noexcept { return edges.size(); }
};

/// Family of a fully assigned configuration. Throws DomainError for skeletons.
[[nodiscard]] ParamFamily make_family(const Problem& problem, const EdgeConfiguration& config);

struct MemberPair {
    PolynomialMatrix B;
    PolynomialMatrix D;
};

/// Throws DomainError for a λ of the wrong length or outside [0,1]^m.
[[nodiscard]] MemberPair instantiate(const ParamFamily& f, std::span<const double> lambda);
/// det(B A + D C) at λ.
[[nodiscard]] Polynomial member_determinant(const ParamFamily& f, std::span<const double> lambda);

struct SweepOptions {
    double routh_tol = kDefaultRouthTol;
    /// Hull distance must exceed hull_tol times the largest corner magnitude at that ω.
    double hull_tol = 1e-9;
    /// Smallest ω-interval, relative to ω_max.
    double freq_floor = 1e-6;
    /// Smallest λ sub-box side.
    double lambda_floor = 1e-6;
    /// Work items (ω-interval × λ-box) per family before giving up.
    std::size_t max_items = 200'000;
    std::size_t max_arity = 20;
};

struct Witness {
    std::vector<double> lambda;
    std::optional<double> omega;
    RouthReason reason = RouthReason::none;
    Polynomial determinant;
    PolynomialMatrix B, D;
};

struct SweepEvidence {
    double omega_max = 0.0;
    std::size_t omega_evaluations = 0;
    std::size_t items = 0;
    std::size_t lambda_splits = 0;
    /// Smallest certified hull distance, relative to the corner magnitude.
    double min_certified_distance = 0.0;
    /// Where an unresolved item sat (inconclusive only).
    std::optional<double> unresolved_omega;
};

struct Certificate {
    Verdict verdict = Verdict::inconclusive;
    /// grid_check found no failure: not a certificate, reported distinctly.
    bool grid_only = false;
    SweepEvidence evidence;
    std::optional<Witness> witness;
    std::string note;
};

struct ValueSetHull {
    std::vector<Complex> corner_values;  ///< det(M(jω)) at the 2^m λ-corners, bit e of the index is λ_e
    std::vector<Complex> hull;           ///< counter-clockwise
    double distance = 0.0;               ///< signed distance from 0 (positive: 0 excluded)
};

/// Corner values via eval_matrix + complex_det and their convex hull. Throws
/// CapExceeded for arity above max_arity.
[[nodiscard]] ValueSetHull value_set_hull(const ParamFamily& f, double omega, std::size_t max_arity = 20);

/// Zero-exclusion certificate: stable member at the λ center, no unstable
/// corner, and 0 outside the multilinear value-set hull for all ω ≥ 0.
[[nodiscard]] Certificate zero_exclusion_sweep(const ParamFamily& f, const SweepOptions& opts = {});

/// is_hurwitz on the uniform (steps+1)^m grid. Throws CapExceeded above cap points.
[[nodiscard]] Certificate grid_check(const ParamFamily& f, unsigned steps, double routh_tol = kDefaultRouthTol,
                                     std::uint64_t cap = 1'000'000);

struct DegreeCheck {
    bool ok = true;
    std::size_t degree = 0;
    std::string evidence;
    std::uint64_t checked = 0;
    bool subsampled = false;
};

/// Determinant degree and leading sign over every Kharitonov vertex
/// combination (every λ-corner of every configuration) plus the box center.
[[nodiscard]] DegreeCheck degree_invariance_check(const Problem& problem, double tol = kDefaultRouthTol,
                                                  std::uint64_t budget = 1'000'000, std::uint64_t seed = 0);

struct AnalysisOptions {
    SweepOptions sweep;
    /// Grid fallback for inconclusive families (0 disables).
    unsigned grid_steps = 0;
    /// Deterministic subsample of families when more exist (0 = all).
    std::uint64_t max_configs = 0;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    /// Largest vertex-combination table kept in memory.
    std::uint64_t table_cap = 1u << 20;
};

struct FamilyWitness {
    EdgeConfiguration config;
    std::string pattern;
    std::uint64_t family_index = 0;
    Witness witness;
};

struct AnalysisReport {
    std::string method;
    Verdict verdict = Verdict::inconclusive;
    std::size_t raw_patterns = 0;
    std::size_t collapsed_patterns = 0;
    std::size_t max_arity = 0;
    ConfigCount formula_count = 0;   ///< collapsed patterns × 4^(non-point entries)
    ConfigCount families_total = 0;  ///< distinct λ-families to certify
    std::uint64_t checked = 0;
    std::uint64_t stable = 0;
    std::uint64_t unstable = 0;
    std::uint64_t inconclusive = 0;
    std::uint64_t grid_only = 0;
    bool subsampled = false;
    bool aborted = false;
    std::string abort_reason;
    DegreeCheck degree;
    std::optional<FamilyWitness> first_witness;
    double min_certified_distance = 0.0;
    std::uint64_t omega_evaluations = 0;
    std::vector<std::string> patterns;  ///< collapsed edge-position sets
    AnalysisOptions settings;
    double wall_ms = 0.0;
};

[[nodiscard]] AnalysisReport analyze(const Problem& problem, Method method, const AnalysisOptions& opts = {});
/// Same pipeline over caller-supplied skeletons (e.g. lemma2 sets).
[[nodiscard]] AnalysisReport analyze_patterns(const Problem& problem, std::vector<EdgeConfiguration> skeletons,
                                              const std::string& tag, const AnalysisOptions& opts = {});

/// Visits the distinct λ-families of the collapsed testing set in enumeration
/// order until `visit` returns false. Returns the number visited.
std::uint64_t for_each_family(const Problem& problem, std::vector<EdgeConfiguration> skeletons,
                              const std::function<bool(const ParamFamily&, std::uint64_t)>& visit);

using ProblemFactory = std::function<Problem(double eps)>;

struct MarginStep {
    double eps = 0.0;
    Verdict verdict = Verdict::inconclusive;
};

struct MarginResult {
    double eps_stable = 0.0;    ///< last ε found stable
    double eps_unstable = 0.0;  ///< first ε found not stable
    std::vector<MarginStep> trace;
};

/// Bisection on ε until eps_unstable − eps_stable ≤ tol. Throws DomainError
/// when lo is not stable or hi is stable.
[[nodiscard]] MarginResult robust_margin(const ProblemFactory& factory, double lo, double hi, Method method,
                                         double tol, const AnalysisOptions& opts = {});

struct OracleOptions {
    std::uint64_t samples = 10'000;
    std::uint64_t seed = 0;
    std::uint64_t vertex_budget = 100'000;
    double routh_tol = kDefaultRouthTol;
};

struct OracleResult {
    bool found = false;
    std::string source;  ///< "vertex" or "sample"
    std::uint64_t index = 0;
    PolynomialMatrix B, D;
    Polynomial determinant;
    RouthReason reason = RouthReason::none;
    std::uint64_t vertices_tested = 0;
    std::uint64_t samples_tested = 0;
    bool vertices_exhausted = false;
};

/// Independent falsification: every Kharitonov vertex combination (when at
/// most vertex_budget) and then uniform coefficient samples of the boxes.
[[nodiscard]] OracleResult oracle_falsify(const Problem& problem, const OracleOptions& opts = {});

}  // namespace ivstab
