#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ivstab/engine.hpp"

namespace ivstab {

/// G(jω) = B(jω)·D(jω)⁻¹.
struct TransferEval {
    ComplexMatrix G;
    double omega = 0.0;
    bool singular = false;
};

[[nodiscard]] TransferEval transfer_eval(const PolynomialMatrix& B, const PolynomialMatrix& D, double omega);

/// Largest singular value by power iteration on MᴴM. Throws ConvergenceError
/// (with the best estimate) when the iteration cap is reached.
[[nodiscard]] double sigma_max(const ComplexMatrix& M, double rel_tol = 1e-10, std::size_t max_iter = 10'000);

enum class CheckStatus { holds, violated, inconclusive, precondition_failed };
[[nodiscard]] const char* to_string(CheckStatus s) noexcept;

struct FreqOptions {
    double tol = 1e-9;
    unsigned points_per_decade = 40;
    unsigned decades = 8;
    /// Interior λ samples per edge parameter, besides the two ends.
    unsigned lambda_interior = 5;
    std::uint64_t max_members = 1'000'000;
};

struct FreqWitness {
    EdgeConfiguration config;
    std::vector<double> lambda;
    double omega = 0.0;  ///< +inf for the limit value
    double value = 0.0;
    PolynomialMatrix B, D;
};

struct FreqReport {
    std::string check;
    std::string method;
    CheckStatus status = CheckStatus::inconclusive;
    /// hinf: largest σ_max seen. spr/sector: smallest normalized pivot of the Hermitian part.
    double worst_value = 0.0;
    std::optional<FreqWitness> worst;
    std::uint64_t families = 0;
    std::uint64_t members = 0;
    std::uint64_t evaluations = 0;
    std::string note;
};

/// ω = 0 and log-spaced points up to 100× the Cauchy bound of det D.
[[nodiscard]] std::vector<double> frequency_grid(const Polynomial& det_d, const FreqOptions& opts = {});

/// sup_ω σ_max(G(jω)) < 1 over the testing set, λ on corners plus an interior grid.
[[nodiscard]] FreqReport hinf_lt_one(const Problem& problem, Method method, const FreqOptions& opts = {});
/// Hermitian part of G(jω) positive definite over the testing set.
[[nodiscard]] FreqReport spr_check(const Problem& problem, Method method, const FreqOptions& opts = {});

/// Sector gain K (symmetric positive definite) and multiplier η ≥ 0.
class SectorSpec {
public:
    /// Throws DomainError unless K is symmetric positive definite and η ≥ 0.
    SectorSpec(RealMatrix K, double eta);
    [[nodiscard]] const RealMatrix& K() const noexcept { return K_; }
    [[nodiscard]] double eta() const noexcept { return eta_; }

private:
    RealMatrix K_;
    double eta_;
};

/// Hermitian part of Z(jω) = I + (1 + jωη)·K·G(jω) positive definite. Throws
/// PreconditionFailed when G is not strictly proper.
[[nodiscard]] FreqReport sector_positivity(const Problem& problem, const SectorSpec& sector, Method method,
                                           const FreqOptions& opts = {});

struct ColumnReduced {
    bool yes = false;
    std::vector<std::size_t> column_degrees;
    double leading_det = 0.0;
    std::string evidence;
};

[[nodiscard]] ColumnReduced column_reduced_check(const PolynomialMatrix& D, double tol = 1e-9);

/// Robust stability of the loop with plant B·D⁻¹ and controller factors A, C.
[[nodiscard]] AnalysisReport closed_loop_stable(const Problem& problem, Method method,
                                                const AnalysisOptions& opts = {});

}  // namespace ivstab
