#ifndef EWLAB_DECOMP_HPP
#define EWLAB_DECOMP_HPP

#include "ewlab/linalg.hpp"
#include "ewlab/witness.hpp"

#include <cstdint>
#include <optional>

namespace ewlab {

struct ConstructionMismatch : Error {
    ConstructionMismatch(const std::string& what, double r) : Error(what), residual(r) {}
    double residual;
};

/// W = P + Q^Gamma with P, Q >= 0, Gamma the partial transpose on `gamma_side`.
struct DecompositionCertificate {
    ComplexMatrix p_part;
    ComplexMatrix q_part;
    Subsystem gamma_side = Subsystem::B;
    double residual = 0.0;
};

/// Explicit P + Q^Gamma split of the unnormalized W_{Phi^(n,n/2)}. Both partial-transpose
/// sides are tried; the one that reproduces W is recorded.
DecompositionCertificate decompose_half(int n);

bool verify_decomposition(const Witness& w, const DecompositionCertificate& cert, const Tolerances& tol = {});

/// Multiplies both parts by `factor` (e.g. 1/(n(n-1)) for the normalized witness).
DecompositionCertificate scale_certificate(const DecompositionCertificate& cert, double factor);

struct PptDetection {
    ComplexMatrix rho;
    double value = 0.0;  // Tr(W rho)
    double psd_residual = 0.0;
    double ppt_residual = 0.0;
    double trace_residual = 0.0;
};

struct PptSearchOptions {
    int budget = 4;  // starts: maximally mixed first, then perturbed eigenstates of W
    std::uint64_t seed = 0;
    int max_iterations = 2000;
    int projection_iterations = 30;
    double threshold = 1e-6;
};

struct PptSearchResult {
    std::optional<PptDetection> detection;  // set when the best value < -threshold
    PptDetection best;                      // best feasible point regardless of threshold
    int starts = 0;
    std::vector<double> start_values;
};

/// Projected descent of Tr(W rho) over PPT states; any feasible rho with negative value
/// certifies that W is indecomposable.
PptSearchResult ppt_detection_search(const Witness& w, const PptSearchOptions& options = {});

/// Euclidean projection onto {rho >= 0, Tr rho = 1}.
ComplexMatrix project_density(const ComplexMatrix& a);
/// Euclidean projection onto {rho Hermitian, rho^{T_B} >= 0}.
ComplexMatrix project_ppt(const ComplexMatrix& a, const BipartiteDims& dims);

}  // namespace ewlab

#endif  // EWLAB_DECOMP_HPP
