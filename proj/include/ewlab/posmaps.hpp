#ifndef EWLAB_POSMAPS_HPP
#define EWLAB_POSMAPS_HPP

#include "ewlab/linalg.hpp"

#include <cstdint>
#include <vector>

namespace ewlab {

/// X -> sum_i C_i X C_i^dag - sum_j D_j X D_j^dag, with every term out_dim x in_dim.
struct ElementaryMap {
    int in_dim = 0;
    int out_dim = 0;
    std::vector<ComplexMatrix> plus_terms;
    std::vector<ComplexMatrix> minus_terms;

    ElementaryMap(int in, int out, std::vector<ComplexMatrix> plus, std::vector<ComplexMatrix> minus);
};

/// Parameters (n, k) of the cyclic family; indices are 0-based and reduced mod n.
struct FamilySpec {
    int n = 3;
    int k = 1;

    FamilySpec(int n_, int k_);

    int shift(int i) const { return (i + k) % n; }
    bool is_half() const { return 2 * k == n; }
    /// n(n-1): trace of the unnormalized Choi matrix.
    double trace_scale() const { return static_cast<double>(n) * (n - 1); }
    bool operator==(const FamilySpec&) const = default;
};

ComplexMatrix apply_map(const ElementaryMap& phi, const ComplexMatrix& x);

/// (n-1) sum_i E_ii A E_ii + sum_i E_{i,s(i)} A E_{s(i),i} - A with s(i) = i + k mod n.
ElementaryMap phi_nk(const FamilySpec& spec);

/// Block matrix whose (i, j) block is phi(E_ij); dims are (in_dim, out_dim).
ComplexMatrix map_to_choi(const ElementaryMap& phi);

/// Spectral split of a Hermitian Choi matrix into plus/minus Kraus-like terms.
/// Eigenvalues with |lambda| <= drop_tol are discarded.
ElementaryMap choi_to_map(const ComplexMatrix& w, const BipartiteDims& dims, double drop_tol = 1e-12);

struct PositivityReport {
    double min_value = 0.0;
    ComplexVector argmin_x;
    ComplexVector argmin_y;
    int restarts_used = 0;
    bool consistent_with_positive = false;  // min_value >= -1e-9; heuristic, not a proof
};

/// Multistart see-saw minimization of <y|phi(|x><x|)|y> over unit x, y.
PositivityReport positivity_scan(const ElementaryMap& phi, int budget, std::uint64_t seed);

struct CoefficientSolve {
    ComplexMatrix alpha;  // targets x basis
    ComplexVector probe;
    double residual = 0.0;
    double gram_norm = 0.0;  // ||alpha alpha^dag||

    bool feasible() const { return residual <= 1e-9 * (1.0 + probe.norm()); }
};

/// Least-Frobenius-norm alpha with target_j p = sum_i alpha(j, i) basis_i p for every j.
/// A residual above tolerance means the targets are not a locally linear combination of
/// the basis at this probe.
CoefficientSolve local_coefficients(const std::vector<ComplexMatrix>& targets,
                                    const std::vector<ComplexMatrix>& basis, const ComplexVector& probe);

struct FMatrixEvaluation {
    double gram_norm = 0.0;
    bool candidate_feasible = true;  // false -> gram_norm is +inf
    bool extrapolated = false;       // more than one minus-term row
};

/// ||F F^dag|| where F stacks the minimum-norm coefficients of the minus terms and of
/// `candidate` over the plus terms at `probe`. A value above 1 says X -> phi(X) - C X C^dag
/// is not positive. Probes with a zero entry are rejected.
FMatrixEvaluation fmatrix_evaluate(const ElementaryMap& phi, const ComplexMatrix& candidate,
                                   const ComplexVector& probe);
double fmatrix_gram_norm(const ElementaryMap& phi, const ComplexMatrix& candidate, const ComplexVector& probe);

struct ClosedFormCoefficients {
    ComplexVector alpha;
    ComplexVector beta;

    double squared_norm() const { return alpha.squaredNorm() + beta.squaredNorm(); }
};

/// Analytic minimum-norm coefficients of the identity over the Phi^(n,1) plus terms:
/// alpha_i = sqrt(n-1) r_i / (1 + (n-1) r_i), beta_i = (1 - sqrt(n-1) alpha_i) x_i / x_{i+1},
/// r_i = |x_i / x_{i+1}|^2.
ClosedFormCoefficients closed_form_coeffs_phi_n1(int n, const ComplexVector& probe);

}  // namespace ewlab

#endif  // EWLAB_POSMAPS_HPP
