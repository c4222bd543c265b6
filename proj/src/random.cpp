#include "ewlab/random.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>

namespace ewlab {

namespace {

Complex complex_normal(Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

}  // namespace

ComplexVector random_unit_vector(int dim, Rng& rng) {
    ComplexVector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = complex_normal(rng);
    return v / v.norm();
}

ComplexMatrix random_gaussian_matrix(int rows, int cols, Rng& rng) {
    ComplexMatrix g(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) g(i, j) = complex_normal(rng);
    }
    return g;
}

ComplexMatrix random_unitary(int dim, Rng& rng) {
    const ComplexMatrix g = random_gaussian_matrix(dim, dim, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        const double mag = std::abs(d);
        if (mag > 0.0) q.col(j) *= d / mag;
    }
    return q;
}

ComplexMatrix random_hermitian(int dim, Rng& rng) {
    const ComplexMatrix g = random_gaussian_matrix(dim, dim, rng);
    return 0.5 * (g + g.adjoint());
}

ComplexVector random_phase_vector(int dim, Rng& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    ComplexVector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = std::polar(1.0, angle(rng));
    return v;
}

}  // namespace ewlab
