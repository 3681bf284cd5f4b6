#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ivstab/polymatrix.hpp"

namespace ivstab {

using ConfigCount = boost::multiprecision::cpp_int;

enum class Side : std::uint8_t { B = 0, D = 1 };

/// Entry of B or D, zero-based row/column.
struct Position {
    Side side = Side::B;
    std::uint8_t row = 0;
    std::uint8_t col = 0;

    friend auto operator<=>(const Position&, const Position&) = default;
};

/// Flat index of a position among the 2n² entries of (B, D): B row-major, then D.
[[nodiscard]] inline std::size_t position_index(const Position& p, std::size_t n) {
    return static_cast<std::size_t>(p.side) * n * n + p.row * n + p.col;
}
[[nodiscard]] Position position_at(std::size_t index, std::size_t n);
/// "B(1,2)" with one-based indices.
[[nodiscard]] std::string to_string(const Position& p);

enum class SelectionKind : std::uint8_t { unassigned, vertex, edge };

/// Vertex number 1..4, or edge number 1..4 in the pair order (1,2),(2,4),(4,3),(3,1).
struct EntrySelection {
    SelectionKind kind = SelectionKind::unassigned;
    std::uint8_t index = 0;

    friend bool operator==(const EntrySelection&, const EntrySelection&) = default;
};

enum class Enumeration { prop1, thm1_row, thm1_column, lemma2_N, lemma2_NE, custom };
[[nodiscard]] const char* to_string(Enumeration e) noexcept;

struct EdgeConfiguration {
    std::size_t n = 0;
    std::vector<EntrySelection> selections;  ///< one per position_index
    std::vector<Position> edge_positions;    ///< λ parameter order
    Enumeration origin = Enumeration::custom;
    std::size_t pattern_id = 0;
    /// prop1: σ then σ′ (zero-based columns). thm1 row/column and lemma2: one
    /// code per row (or column) = side * n + designated index; -1 when the row has no edge.
    std::vector<int> pattern;

    [[nodiscard]] std::size_t arity() const noexcept { return edge_positions.size(); }
    [[nodiscard]] bool is_skeleton() const;
    [[nodiscard]] const EntrySelection& at(const Position& p) const { return selections[position_index(p, n)]; }
    [[nodiscard]] std::string describe_pattern() const;
};

enum class Thm1Variant { row, column };
enum class EnumerationMode { patterns_only, full };
enum class Lemma2Set { N, N_E };

inline constexpr std::uint64_t kDefaultFullCap = 10'000'000;

/// Skeletons (edge positions fixed, all indices unassigned).
[[nodiscard]] std::vector<EdgeConfiguration> prop1_patterns(std::size_t n);
[[nodiscard]] std::vector<EdgeConfiguration> thm1_patterns(std::size_t n, Thm1Variant variant);
/// `row` is one-based.
[[nodiscard]] std::vector<EdgeConfiguration> lemma2_patterns(std::size_t n, std::size_t row, Lemma2Set set);

/// Lazy stream over configurations. In full mode every skeleton is expanded
/// over 4 vertex choices at each vertex position and 4 edge choices at each
/// edge position, in mixed-radix order with the last position fastest.
class ConfigStream {
public:
    ConfigStream(std::vector<EdgeConfiguration> skeletons, EnumerationMode mode);

    bool next(EdgeConfiguration& out);
    void reset();
    [[nodiscard]] ConfigCount total() const;
    [[nodiscard]] EnumerationMode mode() const noexcept { return mode_; }
    [[nodiscard]] const std::vector<EdgeConfiguration>& skeletons() const noexcept { return skeletons_; }

private:
    std::vector<EdgeConfiguration> skeletons_;
    EnumerationMode mode_;
    std::size_t pattern_ = 0;
    std::vector<std::uint8_t> digits_;
    bool started_ = false;
};

/// Throws DimensionMismatch for unequal B/D orders, CapExceeded when full mode
/// would exceed `cap` configurations.
[[nodiscard]] ConfigStream prop1_enumerate(const IntervalPolynomialMatrix& B, const IntervalPolynomialMatrix& D,
                                           EnumerationMode mode, std::uint64_t cap = kDefaultFullCap);
[[nodiscard]] ConfigStream thm1_enumerate(const IntervalPolynomialMatrix& B, const IntervalPolynomialMatrix& D,
                                          Thm1Variant variant, EnumerationMode mode,
                                          std::uint64_t cap = kDefaultFullCap);
[[nodiscard]] ConfigStream lemma2_enumerate(const IntervalPolynomialMatrix& B, const IntervalPolynomialMatrix& D,
                                            std::size_t row, Lemma2Set set, EnumerationMode mode,
                                            std::uint64_t cap = kDefaultFullCap);

/// Distinct Kharitonov vertices and non-degenerate edges of one entry.
struct EntryChoices {
    bool full_point = false;
    std::vector<Polynomial> vertices;                    ///< distinct, first-appearance order K1..K4
    std::array<std::uint8_t, 4> vertex_id{};             ///< K index (0-based) -> distinct id
    std::vector<std::array<std::uint8_t, 2>> edges;      ///< distinct unordered (from, to) ids, from != to
    std::vector<std::uint8_t> edge_index;                ///< Kharitonov edge number (1..4) realizing edges[k]
};

[[nodiscard]] EntryChoices entry_choices(const IntervalPolynomial& ip);

/// Pattern left after degeneracy collapse: edge positions on non-point entries.
struct CollapsedPattern {
    std::vector<Position> edge_positions;  ///< sorted
    EdgeConfiguration representative;      ///< first source skeleton
    std::vector<std::size_t> source_patterns;
};

struct CollapseResult {
    std::size_t input_configurations = 0;
    std::size_t raw_patterns = 0;         ///< distinct source pattern ids
    std::size_t distinct_patterns = 0;    ///< distinct edge-position sets after point collapse
    std::vector<CollapsedPattern> patterns;  ///< after removing patterns subsumed by larger ones
    ConfigCount full_count = 0;           ///< Σ over patterns of 4^(non-point positions)
    ConfigCount distinct_families = 0;    ///< Σ over patterns of distinct vertex/edge choices
    std::size_t distinct_input_families = 0;  ///< full-mode input only: exact dedup count
};

/// Replaces edges on point entries by their vertex, drops patterns whose edge
/// set is contained in another's (vertices lie on edges), and counts.
[[nodiscard]] CollapseResult collapse_degenerate(ConfigStream& stream, const IntervalPolynomialMatrix& B,
                                                 const IntervalPolynomialMatrix& D);

/// One λ-parametrized family in canonical form: distinct-id choices per entry.
struct CanonicalFamily {
    std::vector<std::uint8_t> vertex;  ///< distinct vertex id per position (ignored at edge positions)
    std::vector<Position> edge_positions;
    std::vector<std::array<std::uint8_t, 2>> edge_ends;  ///< (from id, to id) per edge position
    std::size_t pattern = 0;           ///< index into CollapseResult::patterns
};

/// Enumerates the distinct canonical families of collapsed patterns in
/// deterministic order.
class FamilyEnumerator {
public:
    FamilyEnumerator(std::vector<CollapsedPattern> patterns, const std::vector<EntryChoices>& choices,
                     std::size_t n);
    bool next(CanonicalFamily& out);
    [[nodiscard]] ConfigCount total() const;
    /// Families of pattern p.
    [[nodiscard]] std::uint64_t count(std::size_t p) const;
    /// Decode the k-th family of pattern p.
    [[nodiscard]] CanonicalFamily decode(std::size_t p, std::uint64_t k) const;
    [[nodiscard]] const std::vector<CollapsedPattern>& patterns() const noexcept { return patterns_; }

private:
    std::vector<CollapsedPattern> patterns_;
    const std::vector<EntryChoices>* choices_;
    std::size_t n_;
    std::size_t p_ = 0;
    std::uint64_t k_ = 0;
};

/// Full EdgeConfiguration (indices assigned) realizing a canonical family.
[[nodiscard]] EdgeConfiguration to_configuration(const CanonicalFamily& f, const std::vector<EntryChoices>& choices,
                                                 const CollapsedPattern& pattern, std::size_t n);

struct CountFormulas {
    ConfigCount prop1;
    ConfigCount thm1;
    ConfigCount prop1_patterns;
    ConfigCount thm1_patterns;
};

/// prop1 = 4^{2n²}(n!)², thm1 = Σ_t C(n,t)² 4^{2n²} n!, and the pattern factors.
[[nodiscard]] CountFormulas count_formulas(std::size_t n);

}  // namespace ivstab
