#include "ivstab/testing_sets.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace ivstab {

namespace {

constexpr std::size_t kMaxPatterns = 10'000'000;

EdgeConfiguration make_skeleton(std::size_t n, Enumeration origin, std::size_t id, std::vector<Position> edges,
                                std::vector<int> pattern) {
    EdgeConfiguration c;
    c.n = n;
    c.selections.assign(2 * n * n, EntrySelection{SelectionKind::vertex, 0});
    for (const auto& p : edges) c.selections[position_index(p, n)] = {SelectionKind::edge, 0};
    c.edge_positions = std::move(edges);
    c.origin = origin;
    c.pattern_id = id;
    c.pattern = std::move(pattern);
    return c;
}

void require_order(std::size_t n) {
    if (n == 0) throw DomainError("matrix order must be positive");
    if (n > kMaxSymbolicDetOrder) throw CapExceeded("testing sets limited to order 8");
}

constexpr std::array<Side, 2> kSides{Side::B, Side::D};

// Assign to each of n slots (rows or columns) a side and a distinct index within that side.
void injective_side_assignments(std::size_t n, std::vector<std::vector<int>>& out) {
    std::vector<int> codes(n, -1);
    std::vector<std::uint32_t> used(2, 0);
    auto rec = [&](auto&& self, std::size_t slot) -> void {
        if (slot == n) {
            if (out.size() >= kMaxPatterns) throw CapExceeded("too many testing-set patterns");
            out.push_back(codes);
            return;
        }
        for (std::size_t code = 0; code < 2 * n; ++code) {
            const std::size_t side = code / n;
            const std::uint32_t bit = 1u << (code % n);
            if (used[side] & bit) continue;
            used[side] |= bit;
            codes[slot] = static_cast<int>(code);
            self(self, slot + 1);
            used[side] &= ~bit;
        }
    };
    rec(rec, 0);
}

void check_dims(const IntervalPolynomialMatrix& B, const IntervalPolynomialMatrix& D) {
    if (B.n() != D.n()) {
        throw DimensionMismatch("B and D must have the same order (" + std::to_string(B.n()) + " vs " +
                                std::to_string(D.n()) + ")");
    }
}

void check_cap(const ConfigStream& s, std::uint64_t cap) {
    if (s.mode() == EnumerationMode::full && s.total() > ConfigCount(cap)) {
        throw CapExceeded("full enumeration would produce " + s.total().str() +
                          " configurations (cap " + std::to_string(cap) + ")");
    }
}

}  // namespace

Position position_at(std::size_t index, std::size_t n) {
    const std::size_t nn = n * n;
    return Position{index >= nn ? Side::D : Side::B, static_cast<std::uint8_t>((index % nn) / n),
                    static_cast<std::uint8_t>(index % n)};
}

std::string to_string(const Position& p) {
    std::ostringstream os;
    os << (p.side == Side::B ? "B" : "D") << "(" << p.row + 1 << "," << p.col + 1 << ")";
    return os.str();
}

const char* to_string(Enumeration e) noexcept {
    switch (e) {
        case Enumeration::prop1: return "prop1";
        case Enumeration::thm1_row: return "thm1_row";
        case Enumeration::thm1_column: return "thm1_column";
        case Enumeration::lemma2_N: return "lemma2_N";
        case Enumeration::lemma2_NE: return "lemma2_NE";
        case Enumeration::custom: return "custom";
    }
    return "unknown";
}

bool EdgeConfiguration::is_skeleton() const {
    return std::any_of(selections.begin(), selections.end(), [](const EntrySelection& s) { return s.index == 0; });
}

std::string EdgeConfiguration::describe_pattern() const {
    std::ostringstream os;
    auto list = [&](std::size_t from, std::size_t count) {
        os << "[";
        for (std::size_t k = 0; k < count; ++k) os << (k ? "," : "") << pattern[from + k] + 1;
        os << "]";
    };
    auto slots = [&](const char* what) {
        for (std::size_t k = 0; k < pattern.size(); ++k) {
            if (k) os << " ";
            os << what << k + 1 << ":";
            if (pattern[k] < 0) {
                os << "-";
                continue;
            }
            os << (static_cast<std::size_t>(pattern[k]) / n == 0 ? "B" : "D") << "@"
               << static_cast<std::size_t>(pattern[k]) % n + 1;
        }
    };
    switch (origin) {
        case Enumeration::prop1:
            os << "sigma=";
            list(0, n);
            os << " sigma'=";
            list(n, n);
            break;
        case Enumeration::thm1_row: slots("row"); break;
        case Enumeration::thm1_column: slots("col"); break;
        case Enumeration::lemma2_N: os << "k1=" << pattern[0] + 1 << " k2=" << pattern[1] + 1; break;
        case Enumeration::lemma2_NE:
            os << (static_cast<std::size_t>(pattern[0]) / n == 0 ? "B" : "D") << "@"
               << static_cast<std::size_t>(pattern[0]) % n + 1;
            break;
        case Enumeration::custom: os << "custom"; break;
    }
    return os.str();
}

std::vector<EdgeConfiguration> prop1_patterns(std::size_t n) {
    require_order(n);
    std::vector<int> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::vector<std::vector<int>> perms;
    do {
        perms.push_back(sigma);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    if (perms.size() * perms.size() > kMaxPatterns) throw CapExceeded("too many prop1 patterns");

    std::vector<EdgeConfiguration> out;
    out.reserve(perms.size() * perms.size());
    for (const auto& s : perms)
        for (const auto& t : perms) {
            std::vector<Position> edges;
            for (std::size_t i = 0; i < n; ++i)
                edges.push_back({Side::B, static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(s[i])});
            for (std::size_t i = 0; i < n; ++i)
                edges.push_back({Side::D, static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(t[i])});
            std::vector<int> pattern(s);
            pattern.insert(pattern.end(), t.begin(), t.end());
            out.push_back(make_skeleton(n, Enumeration::prop1, out.size(), std::move(edges), std::move(pattern)));
        }
    return out;
}

std::vector<EdgeConfiguration> thm1_patterns(std::size_t n, Thm1Variant variant) {
    require_order(n);
    std::vector<std::vector<int>> codes;
    injective_side_assignments(n, codes);
    std::vector<EdgeConfiguration> out;
    out.reserve(codes.size());
    for (auto& c : codes) {
        std::vector<Position> edges;
        for (std::size_t slot = 0; slot < n; ++slot) {
            const auto side = static_cast<Side>(static_cast<std::size_t>(c[slot]) / n);
            const auto idx = static_cast<std::uint8_t>(static_cast<std::size_t>(c[slot]) % n);
            const auto s = static_cast<std::uint8_t>(slot);
            edges.push_back(variant == Thm1Variant::row ? Position{side, s, idx} : Position{side, idx, s});
        }
        out.push_back(make_skeleton(n, variant == Thm1Variant::row ? Enumeration::thm1_row : Enumeration::thm1_column,
                                    out.size(), std::move(edges), std::move(c)));
    }
    return out;
}

std::vector<EdgeConfiguration> lemma2_patterns(std::size_t n, std::size_t row, Lemma2Set set) {
    require_order(n);
    if (row < 1 || row > n) throw DomainError("lemma2 row index " + std::to_string(row) + " out of range");
    const auto r = static_cast<std::uint8_t>(row - 1);
    std::vector<EdgeConfiguration> out;
    for (std::size_t a = 0; a < n; ++a) {
        if (set == Lemma2Set::N) {
            for (std::size_t b = 0; b < n; ++b) {
                std::vector<Position> edges{{Side::B, r, static_cast<std::uint8_t>(a)},
                                            {Side::D, r, static_cast<std::uint8_t>(b)}};
                out.push_back(make_skeleton(n, Enumeration::lemma2_N, out.size(), std::move(edges),
                                            {static_cast<int>(a), static_cast<int>(b)}));
            }
        } else {
            for (Side side : kSides) {
                std::vector<Position> edges{{side, r, static_cast<std::uint8_t>(a)}};
                out.push_back(make_skeleton(n, Enumeration::lemma2_NE, out.size(), std::move(edges),
                                            {static_cast<int>(static_cast<std::size_t>(side) * n + a)}));
            }
        }
    }
    return out;
}

ConfigStream::ConfigStream(std::vector<EdgeConfiguration> skeletons, EnumerationMode mode)
    : skeletons_(std::move(skeletons)), mode_(mode) {}

void ConfigStream::reset() {
    pattern_ = 0;
    started_ = false;
    digits_.clear();
}

ConfigCount ConfigStream::total() const {
    ConfigCount t = skeletons_.size();
    if (mode_ == EnumerationMode::full && !skeletons_.empty()) {
        t <<= 2 * skeletons_.front().selections.size();
    }
    return t;
}

bool ConfigStream::next(EdgeConfiguration& out) {
    if (pattern_ >= skeletons_.size()) return false;
    if (mode_ == EnumerationMode::patterns_only) {
        out = skeletons_[pattern_++];
        return true;
    }
    const auto& sk = skeletons_[pattern_];
    if (!started_) {
        digits_.assign(sk.selections.size(), 0);
        started_ = true;
    }
    out = sk;
    for (std::size_t k = 0; k < digits_.size(); ++k) out.selections[k].index = static_cast<std::uint8_t>(digits_[k] + 1);
    // advance, last position fastest
    std::size_t k = digits_.size();
    while (k > 0) {
        --k;
        if (++digits_[k] < 4) return true;
        digits_[k] = 0;
    }
    ++pattern_;
    started_ = false;
    return true;
}

ConfigStream prop1_enumerate(const IntervalPolynomialMatrix& B, const IntervalPolynomialMatrix& D,
                             EnumerationMode mode, std::uint64_t cap) {
    check_dims(B, D);
    ConfigStream s(prop1_patterns(B.n()), mode);
    check_cap(s, cap);
    return s;
}

ConfigStream thm1_enumerate(const IntervalPolynomialMatrix& B, const IntervalPolynomialMatrix& D,
                            Thm1Variant variant, EnumerationMode mode, std::uint64_t cap) {
    check_dims(B, D);
    ConfigStream s(thm1_patterns(B.n(), variant), mode);
    check_cap(s, cap);
    return s;
}

ConfigStream lemma2_enumerate(const IntervalPolynomialMatrix& B, const IntervalPolynomialMatrix& D, std::size_t row,
                              Lemma2Set set, EnumerationMode mode, std::uint64_t cap) {
    check_dims(B, D);
    ConfigStream s(lemma2_patterns(B.n(), row, set), mode);
    check_cap(s, cap);
    return s;
}

EntryChoices entry_choices(const IntervalPolynomial& ip) {
    EntryChoices c;
    c.full_point = is_degenerate(ip).full_point;
    const auto verts = kharitonov_vertices(ip);
    for (std::size_t v = 0; v < 4; ++v) {
        auto it = std::find(c.vertices.begin(), c.vertices.end(), verts[v]);
        if (it == c.vertices.end()) {
            c.vertex_id[v] = static_cast<std::uint8_t>(c.vertices.size());
            c.vertices.push_back(verts[v]);
        } else {
            c.vertex_id[v] = static_cast<std::uint8_t>(it - c.vertices.begin());
        }
    }
    for (std::size_t e = 0; e < 4; ++e) {
        const std::uint8_t a = c.vertex_id[kEdgePairs[e][0] - 1];
        const std::uint8_t b = c.vertex_id[kEdgePairs[e][1] - 1];
        if (a == b) continue;
        const bool seen = std::any_of(c.edges.begin(), c.edges.end(), [&](const auto& ed) {
            return (ed[0] == a && ed[1] == b) || (ed[0] == b && ed[1] == a);
        });
        if (seen) continue;
        c.edges.push_back({a, b});
        c.edge_index.push_back(static_cast<std::uint8_t>(e + 1));
    }
    return c;
}

CollapseResult collapse_degenerate(ConfigStream& stream, const IntervalPolynomialMatrix& B,
                                   const IntervalPolynomialMatrix& D) {
    check_dims(B, D);
    const std::size_t n = B.n();
    std::vector<EntryChoices> choices;
    for (const auto& e : B.entries()) choices.push_back(entry_choices(e));
    for (const auto& e : D.entries()) choices.push_back(entry_choices(e));

    CollapseResult res;
    std::map<std::vector<Position>, std::size_t> index;
    std::vector<CollapsedPattern> distinct;
    std::unordered_set<std::string> family_keys;
    std::unordered_set<std::size_t> raw_ids;

    stream.reset();
    EdgeConfiguration c;
    while (stream.next(c)) {
        ++res.input_configurations;
        raw_ids.insert(c.pattern_id);
        std::vector<Position> edges;
        for (const auto& p : c.edge_positions)
            if (!choices[position_index(p, n)].full_point) edges.push_back(p);
        std::sort(edges.begin(), edges.end());
        auto [it, fresh] = index.try_emplace(edges, distinct.size());
        if (fresh) distinct.push_back(CollapsedPattern{edges, c, {}});
        auto& src = distinct[it->second].source_patterns;
        if (std::find(src.begin(), src.end(), c.pattern_id) == src.end()) src.push_back(c.pattern_id);

        if (!c.is_skeleton()) {
            std::string key(3 * c.selections.size(), '\0');
            for (std::size_t k = 0; k < c.selections.size(); ++k) {
                const auto& ch = choices[k];
                const auto& s = c.selections[k];
                std::uint8_t kind = 1, a = 0, b = 0;
                if (!ch.full_point) {
                    if (s.kind == SelectionKind::edge) {
                        a = ch.vertex_id[kEdgePairs[s.index - 1][0] - 1];
                        b = ch.vertex_id[kEdgePairs[s.index - 1][1] - 1];
                        if (a > b) std::swap(a, b);
                        if (a != b) kind = 2;
                        else b = 0;
                    } else {
                        a = ch.vertex_id[s.index - 1];
                    }
                }
                key[3 * k] = static_cast<char>(kind);
                key[3 * k + 1] = static_cast<char>(a);
                key[3 * k + 2] = static_cast<char>(b);
            }
            family_keys.insert(std::move(key));
        }
    }
    res.raw_patterns = raw_ids.size();
    res.distinct_patterns = distinct.size();
    res.distinct_input_families = family_keys.size();

    for (std::size_t a = 0; a < distinct.size(); ++a) {
        const auto& ea = distinct[a].edge_positions;
        const bool subsumed = std::any_of(distinct.begin(), distinct.end(), [&](const CollapsedPattern& other) {
            const auto& eb = other.edge_positions;
            return eb.size() > ea.size() && std::includes(eb.begin(), eb.end(), ea.begin(), ea.end());
        });
        if (!subsumed) res.patterns.push_back(distinct[a]);
    }

    FamilyEnumerator fam(res.patterns, choices, n);
    res.distinct_families = fam.total();
    std::size_t free_positions = 0;
    for (const auto& ch : choices) free_positions += ch.full_point ? 0 : 1;
    res.full_count = ConfigCount(res.patterns.size()) << (2 * free_positions);
    return res;
}

FamilyEnumerator::FamilyEnumerator(std::vector<CollapsedPattern> patterns, const std::vector<EntryChoices>& choices,
                                   std::size_t n)
    : patterns_(std::move(patterns)), choices_(&choices), n_(n) {}

std::uint64_t FamilyEnumerator::count(std::size_t p) const {
    const auto& edges = patterns_[p].edge_positions;
    std::uint64_t c = 1;
    for (std::size_t k = 0; k < choices_->size(); ++k) {
        const auto& ch = (*choices_)[k];
        const bool is_edge = std::binary_search(edges.begin(), edges.end(), position_at(k, n_));
        c *= is_edge ? ch.edges.size() : ch.vertices.size();
    }
    return c;
}

ConfigCount FamilyEnumerator::total() const {
    ConfigCount t = 0;
    for (std::size_t p = 0; p < patterns_.size(); ++p) t += count(p);
    return t;
}

CanonicalFamily FamilyEnumerator::decode(std::size_t p, std::uint64_t k) const {
    const auto& edges = patterns_[p].edge_positions;
    CanonicalFamily f;
    f.pattern = p;
    f.vertex.assign(choices_->size(), 0);
    f.edge_positions = edges;
    f.edge_ends.resize(edges.size());
    for (std::size_t pos = choices_->size(); pos-- > 0;) {
        const auto& ch = (*choices_)[pos];
        const Position here = position_at(pos, n_);
        auto it = std::lower_bound(edges.begin(), edges.end(), here);
        if (it != edges.end() && *it == here) {
            const std::uint64_t r = ch.edges.size();
            f.edge_ends[static_cast<std::size_t>(it - edges.begin())] = ch.edges[k % r];
            k /= r;
        } else {
            const std::uint64_t r = ch.vertices.size();
            f.vertex[pos] = static_cast<std::uint8_t>(k % r);
            k /= r;
        }
    }
    return f;
}

bool FamilyEnumerator::next(CanonicalFamily& out) {
    while (p_ < patterns_.size() && k_ >= count(p_)) {
        ++p_;
        k_ = 0;
    }
    if (p_ >= patterns_.size()) return false;
    out = decode(p_, k_++);
    return true;
}

EdgeConfiguration to_configuration(const CanonicalFamily& f, const std::vector<EntryChoices>& choices,
                                   const CollapsedPattern& pattern, std::size_t n) {
    EdgeConfiguration c = pattern.representative;
    c.n = n;
    c.edge_positions = f.edge_positions;
    for (std::size_t k = 0; k < choices.size(); ++k) {
        const auto& ch = choices[k];
        std::uint8_t idx = 1;
        for (std::uint8_t v = 0; v < 4; ++v)
            if (ch.vertex_id[v] == f.vertex[k]) {
                idx = static_cast<std::uint8_t>(v + 1);
                break;
            }
        c.selections[k] = {SelectionKind::vertex, idx};
    }
    for (std::size_t e = 0; e < f.edge_positions.size(); ++e) {
        const std::size_t k = position_index(f.edge_positions[e], n);
        const auto& ch = choices[k];
        for (std::size_t j = 0; j < ch.edges.size(); ++j)
            if (ch.edges[j] == f.edge_ends[e]) c.selections[k] = {SelectionKind::edge, ch.edge_index[j]};
    }
    return c;
}

CountFormulas count_formulas(std::size_t n) {
    if (n == 0) throw DomainError("count_formulas: n must be positive");
    ConfigCount fact = 1;
    for (std::size_t k = 2; k <= n; ++k) fact *= k;
    const ConfigCount pow4 = ConfigCount(1) << (4 * n * n);  // 4^{2n²}
    ConfigCount binom_sq_sum = 0;
    ConfigCount binom = 1;  // C(n, t)
    for (std::size_t t = 0; t <= n; ++t) {
        binom_sq_sum += binom * binom;
        binom = binom * (n - t) / (t + 1);
    }
    CountFormulas c;
    c.prop1_patterns = fact * fact;
    c.thm1_patterns = binom_sq_sum * fact;
    c.prop1 = pow4 * c.prop1_patterns;
    c.thm1 = pow4 * c.thm1_patterns;
    return c;
}

}  // namespace ivstab
