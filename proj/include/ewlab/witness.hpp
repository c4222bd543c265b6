#ifndef EWLAB_WITNESS_HPP
#define EWLAB_WITNESS_HPP

#include "ewlab/linalg.hpp"
#include "ewlab/posmaps.hpp"
#include "ewlab/seesaw.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ewlab {

struct NotAWitness : Error {
    using Error::Error;
};
struct CertificateFailure : Error {
    CertificateFailure(const std::string& what, double r) : Error(what), residual(r) {}
    double residual;
};

/// Bipartite Hermitian operator on H (dimA) x K (dimB). `family` records the (n, k)
/// parameters when the operator was built from the cyclic family.
struct Witness {
    ComplexMatrix matrix;
    BipartiteDims dims;
    bool normalized = false;
    std::optional<FamilySpec> family;

    Witness(ComplexMatrix m, BipartiteDims d, bool is_normalized = false,
            std::optional<FamilySpec> fam = std::nullopt);

    double trace() const { return matrix.trace().real(); }
};

/// W_{Phi^(n,k)}, optionally divided by its trace n(n-1).
Witness family_witness(const FamilySpec& spec, bool normalize_trace);

double product_expectation(const ComplexMatrix& w, const BipartiteDims& dims, const ComplexVector& x,
                           const ComplexVector& y);

/// The bilinear form (x, y) -> <x (x) y|W|x (x) y> as a see-saw problem.
SeeSawProblem product_form_problem(const ComplexMatrix& w, const BipartiteDims& dims);

struct BlockPositivityReport {
    double min_value = 0.0;
    ComplexVector argmin_x;
    ComplexVector argmin_y;
    int restarts_used = 0;
    std::vector<int> converged_iterations;  // iteration count per restart
};

struct BlockMinOptions {
    int budget = 64;
    std::uint64_t seed = 0;
    std::vector<ComplexVector> extra_starts;  // run before the structured/random starts
    SeeSawOptions seesaw;
};

std::vector<SeeSawRun> block_min_runs(const ComplexMatrix& w, const BipartiteDims& dims,
                                      const BlockMinOptions& options);
BlockPositivityReport summarize_runs(const std::vector<SeeSawRun>& runs);
BlockPositivityReport block_min(const ComplexMatrix& w, const BipartiteDims& dims, const BlockMinOptions& options);
BlockPositivityReport block_min(const Witness& w, int budget, std::uint64_t seed);

/// Acceptance floor for block positivity: -tol * (1 + ||W||).
double block_floor(const ComplexMatrix& w, const Tolerances& tol = {});

struct ValidationReport {
    bool hermitian = false;
    double max_asymmetry = 0.0;
    double min_eigenvalue = 0.0;
    bool has_negative_eigenvalue = false;
    BlockPositivityReport block;
    bool block_positive = false;
    bool is_witness = false;
};

ValidationReport validate_witness(const Witness& w, int budget, std::uint64_t seed, const Tolerances& tol = {});

/// Tr(W rho). rho must be PSD with unit trace within 1e-10.
double detects(const Witness& w, const ComplexMatrix& rho);

Witness normalize(const Witness& w);

struct PptCheck {
    bool ppt = false;
    double min_pt_eigenvalue = 0.0;
};

PptCheck ppt_check(const ComplexMatrix& rho, const BipartiteDims& dims, double tol = Tolerances{}.ppt);

struct SpaResult {
    double lambda = 0.0;
    double p_star = 0.0;
    ComplexMatrix spa_state;
    double min_eigenvalue = 0.0;
    double min_pt_eigenvalue = 0.0;
    bool ppt = false;
};

/// Mixing weight at which (1 - p) I/(nm) + p W stops being PSD.
double spa_boundary(double lambda, const BipartiteDims& dims);
ComplexMatrix spa_mixture(const Witness& w, double p);

/// Requires a normalized witness; throws NotAWitness when W has no negative eigenvalue or
/// fails the block-positivity scan.
SpaResult spa(const Witness& w, int budget, std::uint64_t seed);

struct ClassicalTerm {
    double weight = 0.0;
    int a = 0;  // |a><a| (x) |b><b|
    int b = 0;
};

struct TwoQubitBlock {
    int first = 0;
    int second = 0;
    ComplexMatrix block;  // basis |first first>, |first second>, |second first>, |second second>
    double min_eigenvalue = 0.0;
    double min_pt_eigenvalue = 0.0;
    bool psd_ok = false;
    bool ppt_ok = false;
};

struct SeparabilityCertificate {
    FamilySpec spec{3, 1};
    double p_star = 0.0;
    double scale = 0.0;  // n(2n-1); blocks * scale have integer entries
    std::vector<ClassicalTerm> diagonal_part;
    std::vector<TwoQubitBlock> blocks;
    double reconstruction_residual = 0.0;
    bool ok = false;
};

/// Splits the SPA state of the normalized W^(n,k), k != n/2, into a diagonal product part
/// plus two-qubit blocks on span{|i>,|j>} (x) span{|i>,|j>}. The n orbit pairs (i, i+k) come
/// first; for n > 3 the remaining pairs follow, n(n-1)/2 blocks in total. Weights come from the
/// computed state. Throws CertificateFailure if the pieces do not reconstruct the state within 1e-10.
SeparabilityCertificate spa_separability_certificate(const FamilySpec& spec);

ComplexMatrix embed_block(const TwoQubitBlock& block, int n);

}  // namespace ewlab

#endif  // EWLAB_WITNESS_HPP
