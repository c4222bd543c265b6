#ifndef EWLAB_TEST_SUPPORT_HPP
#define EWLAB_TEST_SUPPORT_HPP

#include "ewlab/linalg.hpp"
#include "ewlab/random.hpp"

#include <cmath>

namespace testing {

using namespace ewlab;

inline double max_abs(const ComplexMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline ComplexMatrix unit(int n, int i, int j) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e(i, j) = 1.0;
    return e;
}

inline ComplexVector basis(int n, int i) {
    ComplexVector v = ComplexVector::Zero(n);
    v(i) = 1.0;
    return v;
}

// Normalized maximally entangled vector sum_i |ii> / sqrt(n).
inline ComplexVector max_entangled(int n) {
    ComplexVector v = ComplexVector::Zero(n * n);
    for (int i = 0; i < n; ++i) v(i * n + i) = 1.0;
    return v / std::sqrt(static_cast<double>(n));
}

// Swap operator |ij> -> |ji>, built entry by entry.
inline ComplexMatrix flip(int n) {
    ComplexMatrix f = ComplexMatrix::Zero(n * n, n * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) f(j * n + i, i * n + j) = 1.0;
    }
    return f;
}

inline ComplexMatrix random_density(int dim, Rng& rng) {
    const ComplexMatrix g = random_gaussian_matrix(dim, dim, rng);
    ComplexMatrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

}  // namespace testing

#endif  // EWLAB_TEST_SUPPORT_HPP
