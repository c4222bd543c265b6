#ifndef EWLAB_OPTIMALITY_HPP
#define EWLAB_OPTIMALITY_HPP

#include "ewlab/linalg.hpp"
#include "ewlab/posmaps.hpp"
#include "ewlab/witness.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ewlab {

struct ProductVector {
    ComplexVector x;
    ComplexVector y;
    double value = 0.0;  // <x (x) y|W|x (x) y>

    ComplexVector composite() const { return tensor(x, y); }
};

struct SubtractionCheck {
    bool still_block_positive = false;
    bool still_witness = false;
    double min_eigenvalue = 0.0;
    BlockPositivityReport report;
};

/// Block-positivity scan and spectrum of W - epsilon D. D must be PSD.
SubtractionCheck subtract_and_check(const Witness& w, const ComplexMatrix& d, double epsilon, int budget,
                                    std::uint64_t seed, const Tolerances& tol = {});

struct NonOptimalityCertificate {
    ComplexMatrix d;            // |c><c|, the Choi matrix of X -> C X C^dag
    ComplexVector direction;    // c
    double epsilon = 0.0;
    BlockPositivityReport verification;  // scan of W - epsilon d
    double min_eigenvalue_after = 0.0;   // of W - epsilon d; negative
    std::string origin;                  // which candidate family produced c
};

/// Bracket on epsilon*(c) = max{eps : W - eps |c><c| block-positive}. `upper` always comes
/// from an explicit product vector; `lower` from the block-positivity oracle.
struct EpsilonEstimate {
    double lower = 0.0;
    double upper = 0.0;
    bool bisected = false;
    int oracle_calls = 0;
};

struct RankOneSearchOptions {
    int budget = 256;           // random candidates; also the final verification restarts
    std::uint64_t seed = 0;
    int oracle_restarts = 32;   // random restarts per bisection oracle call
    int bisection_iterations = 40;
    int hill_climb_steps = 32;
    double threshold = 1e-6;    // epsilon* needed for a certificate
    std::vector<ComplexVector> seed_candidates;
    std::optional<std::vector<ProductVector>> known_zeros;
    Tolerances tol;
};

struct CandidateScore {
    std::string origin;
    ComplexVector direction;
    EpsilonEstimate estimate;
};

struct RankOneSearchResult {
    std::optional<NonOptimalityCertificate> certificate;
    CandidateScore best;
    int candidates_evaluated = 0;
    int bisections_run = 0;
    std::vector<CandidateScore> seeded;  // estimates for options.seed_candidates, in order
};

/// Product vectors with multi-scale moduli x_{sigma(t)} proportional to s^{-t}: all orderings
/// sigma for n <= 5; otherwise all arithmetic-progression orderings plus a seeded subset. Scales
/// 10..1e5, zero and random phases.
std::vector<ComplexVector> multiscale_probes(int n, std::uint64_t seed);

/// Ratio <xy|W|xy> / |<c|xy>|^2, +inf when the overlap vanishes.
double subtraction_ratio(const ComplexMatrix& w, const BipartiteDims& dims, const ComplexVector& c,
                         const ComplexVector& x, const ComplexVector& y);

EpsilonEstimate estimate_epsilon(const ComplexMatrix& w, const BipartiteDims& dims, const ComplexVector& c,
                                 const std::vector<ProductVector>& pool,
                                 const std::vector<ComplexVector>& probes, const RankOneSearchOptions& options,
                                 std::uint64_t seed);

/// Searches rank-one subtractions W - eps |c><c| that stay block-positive. A missing certificate
/// is evidence consistent with optimality, never a proof.
RankOneSearchResult rank_one_search(const Witness& w, const RankOneSearchOptions& options);

struct SpanReport {
    std::vector<ProductVector> collected;
    int from_search = 0;
    int from_family = 0;
    int rank = 0;
    int ambient = 0;
    bool spanning = false;
};

SpanReport spanning_dimension(const Witness& w, int budget, std::uint64_t seed, const Tolerances& tol = {});

/// x_j = e^{i theta_j}, y_j = e^{-i theta_j} (unnormalized); a zero of every W_{Phi^(n,k)}.
std::pair<ComplexVector, ComplexVector> zero_family_phi(int n, const RealVector& thetas);

/// ||F|| > 1 for F = [[1, b], [conj b, a]] PSD. Throws InvalidArgument if F is not PSD
/// with unit corner.
bool unit_corner_norm_exceeds(const ComplexMatrix& f);

struct CandidateEvidence {
    std::string label;
    ComplexMatrix candidate;
    double max_gram_norm = 0.0;
    int probes = 0;
    int probes_exceeding = 0;
    ComplexVector best_probe;
    bool exceeds = false;  // max_gram_norm > 1 + 1e-9
};

struct FMatrixEvidence {
    std::vector<CandidateEvidence> candidates;
    int probes_per_candidate = 0;
    bool all_exceed = false;
    bool extrapolated = false;
};

/// Candidate mesh: C = I, off-diagonal units, random C (trace nonzero or off-diagonal
/// support) and diagonal trace-zero C, each at scales 1 and 0.1.
std::vector<std::pair<std::string, ComplexMatrix>> fmatrix_candidate_mesh(int n, int m, std::uint64_t seed);

/// Probes per candidate split into thirds: equal moduli with random phases, multi-scale moduli,
/// Gaussian. With `family` set the multi-scale third starts with geometric staircases along the
/// cyclic shift (x_{j + t k} proportional to s^{-t}); otherwise orderings are random.
FMatrixEvidence fmatrix_evidence(const ElementaryMap& phi, int probe_mesh, std::uint64_t seed,
                                 bool extrapolated = false, const std::optional<FamilySpec>& family = std::nullopt);

enum class VerdictKind { CertifiedNonOptimal, SpanningOptimal, NoCertificateFound };

std::string verdict_name(VerdictKind kind);   // non_optimal / spanning_optimal / no_certificate
std::string verdict_label(VerdictKind kind);  // human wording; no_certificate -> "consistent with optimal"

struct OptimalityConfig {
    int restarts = 64;        // spanning search budget
    int search_budget = 256;  // rank_one_search budget
    int probe_mesh = 200;
    std::uint64_t seed = 0;
    Tolerances tol;
};

struct OptimalityVerdict {
    VerdictKind kind = VerdictKind::NoCertificateFound;
    std::optional<NonOptimalityCertificate> certificate;
    SpanReport span;
    std::optional<RankOneSearchResult> search;
    std::optional<FMatrixEvidence> fmatrix;
};

OptimalityVerdict optimality_report(const Witness& w, const OptimalityConfig& config);

}  // namespace ewlab

#endif  // EWLAB_OPTIMALITY_HPP
