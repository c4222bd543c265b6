#ifndef EWLAB_LINALG_HPP
#define EWLAB_LINALG_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ewlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Error hierarchy shared by every module.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidDims : Error {
    using Error::Error;
};
struct InvalidArgument : Error {
    using Error::Error;
};
struct HermiticityViolation : Error {
    HermiticityViolation(const std::string& what, double asymmetry)
        : Error(what), max_asymmetry(asymmetry) {}
    double max_asymmetry;
};

/// Numerical thresholds. Defaults hold for operators up to ~36x36 in double precision.
struct Tolerances {
    double hermiticity = 1e-10;
    double eigen_residual = 1e-9;
    double rank = 1e-8;
    double block_positivity = 1e-9;  // scaled by (1 + ||W||)
    double certificate = 1e-6;       // epsilon* and PPT-detection threshold
    double ppt = 1e-10;
};

/// Subsystem dimensions of H (A, dimension n) and K (B, dimension m).
struct BipartiteDims {
    int dimA = 2;
    int dimB = 2;

    BipartiteDims() = default;
    BipartiteDims(int a, int b);

    int total() const { return dimA * dimB; }
    bool operator==(const BipartiteDims&) const = default;
};

enum class Subsystem { A, B };

struct HermitianSpectrum {
    RealVector eigenvalues;     // ascending
    ComplexMatrix eigenvectors;  // column j pairs with eigenvalues[j]

    double min() const { return eigenvalues[0]; }
    double max() const { return eigenvalues[eigenvalues.size() - 1]; }
};

// Kronecker product, A-major: |i>|j> sits at index i*dimB + j.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor(const ComplexVector& a, const ComplexVector& b);

ComplexMatrix partial_transpose(const ComplexMatrix& w, const BipartiteDims& dims, Subsystem side);

double max_asymmetry(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double tol = Tolerances{}.hermiticity);
bool all_finite(const ComplexMatrix& a);

/// Full ascending spectrum; throws HermiticityViolation when ||A - A^dag||_max exceeds
/// tol * (1 + ||A||).
HermitianSpectrum hermitian_spectrum(const ComplexMatrix& a, double tol = Tolerances{}.hermiticity);
double min_eigenvalue(const ComplexMatrix& a, double tol = Tolerances{}.hermiticity);

double operator_norm(const ComplexMatrix& a);

/// Singular values above tol * (largest singular value) of the matrix whose rows are `vectors`.
int numerical_rank(const std::vector<ComplexVector>& vectors, double tol = Tolerances{}.rank);

ComplexMatrix matrix_unit(int rows, int cols, int i, int j);
ComplexMatrix projector(const ComplexVector& v);

/// <v|A|v>, real part.
double expectation(const ComplexMatrix& a, const ComplexVector& v);

// Reshape between composite vectors (A-major over n x m) and m x n operators:
// op(a, j) = v[j * m + a]. With this convention |v><v| is the Choi matrix of X -> C X C^dag.
ComplexMatrix vector_to_operator(const ComplexVector& v, const BipartiteDims& dims);
ComplexVector operator_to_vector(const ComplexMatrix& c);

}  // namespace ewlab

#endif  // EWLAB_LINALG_HPP
