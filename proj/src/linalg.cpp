#include "ewlab/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace ewlab {

BipartiteDims::BipartiteDims(int a, int b) : dimA(a), dimB(b) {
    if (a < 2 || b < 2) {
        throw InvalidDims("subsystem dimensions must be >= 2, got " + std::to_string(a) + "x" +
                          std::to_string(b));
    }
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& w, const BipartiteDims& dims, Subsystem side) {
    const int n = dims.dimA;
    const int m = dims.dimB;
    if (w.rows() != dims.total() || w.cols() != dims.total()) {
        throw InvalidDims("partial_transpose: matrix is " + std::to_string(w.rows()) + "x" +
                          std::to_string(w.cols()) + ", expected " + std::to_string(dims.total()) +
                          " square");
    }
    ComplexMatrix out(w.rows(), w.cols());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (side == Subsystem::A) {
                out.block(i * m, j * m, m, m) = w.block(j * m, i * m, m, m);
            } else {
                out.block(i * m, j * m, m, m) = w.block(i * m, j * m, m, m).transpose();
            }
        }
    }
    return out;
}

double max_asymmetry(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    const double scale = 1.0 + a.cwiseAbs().maxCoeff();
    return max_asymmetry(a) <= tol * scale;
}

bool all_finite(const ComplexMatrix& a) {
    return a.allFinite();
}

HermitianSpectrum hermitian_spectrum(const ComplexMatrix& a, double tol) {
    if (a.rows() != a.cols()) {
        throw InvalidDims("hermitian_spectrum: matrix is not square");
    }
    if (!is_hermitian(a, tol)) {
        const double asym = max_asymmetry(a);
        throw HermiticityViolation("hermitian_spectrum: max asymmetry " + std::to_string(asym), asym);
    }
    const ComplexMatrix sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw Error("hermitian_spectrum: eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const ComplexMatrix& a, double tol) {
    return hermitian_spectrum(a, tol).min();
}

double operator_norm(const ComplexMatrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    return svd.singularValues()(0);
}

int numerical_rank(const std::vector<ComplexVector>& vectors, double tol) {
    if (vectors.empty()) return 0;
    const Eigen::Index len = vectors.front().size();
    ComplexMatrix stacked(static_cast<Eigen::Index>(vectors.size()), len);
    for (std::size_t r = 0; r < vectors.size(); ++r) {
        if (vectors[r].size() != len) {
            throw InvalidDims("numerical_rank: vectors of different lengths");
        }
        stacked.row(static_cast<Eigen::Index>(r)) = vectors[r].transpose();
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(stacked);
    const RealVector& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > tol * sv(0)) ++rank;
    }
    return rank;
}

ComplexMatrix matrix_unit(int rows, int cols, int i, int j) {
    ComplexMatrix e = ComplexMatrix::Zero(rows, cols);
    e(i, j) = 1.0;
    return e;
}

ComplexMatrix projector(const ComplexVector& v) {
    return v * v.adjoint();
}

double expectation(const ComplexMatrix& a, const ComplexVector& v) {
    return v.dot(a * v).real();
}

ComplexMatrix vector_to_operator(const ComplexVector& v, const BipartiteDims& dims) {
    if (v.size() != dims.total()) {
        throw InvalidDims("vector_to_operator: length mismatch");
    }
    const int n = dims.dimA;
    const int m = dims.dimB;
    ComplexMatrix c(m, n);
    for (int j = 0; j < n; ++j) {
        for (int a = 0; a < m; ++a) {
            c(a, j) = v(j * m + a);
        }
    }
    return c;
}

ComplexVector operator_to_vector(const ComplexMatrix& c) {
    const auto m = c.rows();
    const auto n = c.cols();
    ComplexVector v(n * m);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index a = 0; a < m; ++a) {
            v(j * m + a) = c(a, j);
        }
    }
    return v;
}

}  // namespace ewlab
