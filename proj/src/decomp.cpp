#include "ewlab/decomp.hpp"

#include "ewlab/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace ewlab {

namespace {

ComplexMatrix units_product(int n, int i, int j, int k, int l) {
    return tensor(matrix_unit(n, n, i, j), matrix_unit(n, n, k, l));
}

int cyclic_distance(int i, int j, int n) {
    const int d = std::abs(i - j) % n;
    return std::min(d, n - d);
}

Eigen::SelfAdjointEigenSolver<ComplexMatrix> hermitian_solver(const ComplexMatrix& a) {
    return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(0.5 * (a + a.adjoint()));
}

RealVector project_simplex(const RealVector& v) {
    std::vector<double> u(v.data(), v.data() + v.size());
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        cumulative += u[i];
        const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) theta = t;
    }
    return (v.array() - theta).max(0.0).matrix();
}

double worst_eigenvalue(const ComplexMatrix& rho, const BipartiteDims& dims) {
    return std::min(min_eigenvalue(rho), min_eigenvalue(partial_transpose(rho, dims, Subsystem::B)));
}

// Mixes with I/N just enough that rho and rho^{T_B} are PSD; I/N is its own partial transpose.
ComplexMatrix restore_feasibility(ComplexMatrix rho, const BipartiteDims& dims) {
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();
    const double e = worst_eigenvalue(rho, dims);
    if (e < 0.0) {
        const int total = dims.total();
        const double t = -e * total / (1.0 - e * total);
        rho = (1.0 - t) * rho + t * ComplexMatrix::Identity(total, total) / static_cast<double>(total);
    }
    return rho;
}

ComplexMatrix dykstra(const ComplexMatrix& z, const BipartiteDims& dims, int iterations) {
    ComplexMatrix x = z;
    ComplexMatrix p = ComplexMatrix::Zero(z.rows(), z.cols());
    ComplexMatrix q = ComplexMatrix::Zero(z.rows(), z.cols());
    for (int it = 0; it < iterations; ++it) {
        const ComplexMatrix y = project_density(x + p);
        p = x + p - y;
        const ComplexMatrix next = project_ppt(y + q, dims);
        q = y + q - next;
        x = next;
    }
    return x;
}

PptDetection describe(const ComplexMatrix& w, const ComplexMatrix& rho, const BipartiteDims& dims) {
    PptDetection d;
    d.rho = rho;
    d.value = (w * rho).trace().real();
    d.psd_residual = std::max(0.0, -min_eigenvalue(rho));
    d.ppt_residual = std::max(0.0, -min_eigenvalue(partial_transpose(rho, dims, Subsystem::B)));
    d.trace_residual = std::abs(rho.trace().real() - 1.0);
    return d;
}

}  // namespace

DecompositionCertificate decompose_half(int n) {
    if (n < 4 || n % 2 != 0) {
        throw InvalidArgument("decompose_half: n must be even and >= 4, got " + std::to_string(n));
    }
    const int half = n / 2;
    const int dim = n * n;
    ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
    for (int i = 0; i < n; ++i) p += (n - 2.0) * units_product(n, i, i, i, i);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j && cyclic_distance(i, j, n) != half) p -= units_product(n, i, j, i, j);
        }
    }
    ComplexMatrix q = ComplexMatrix::Zero(dim, dim);
    for (int i = 0; i < n; ++i) {
        const int s = (i + half) % n;
        q += units_product(n, s, s, i, i);
    }
    for (int i = 0; i < half; ++i) {
        const int s = i + half;
        q -= units_product(n, s, i, i, s);
        q -= units_product(n, i, s, s, i);
    }

    const Witness w = family_witness(FamilySpec(n, half), false);
    const BipartiteDims dims(n, n);
    DecompositionCertificate best;
    best.p_part = p;
    best.q_part = q;
    best.residual = std::numeric_limits<double>::infinity();
    for (Subsystem side : {Subsystem::B, Subsystem::A}) {
        const double r = (w.matrix - p - partial_transpose(q, dims, side)).norm();
        if (r < best.residual) {
            best.residual = r;
            best.gamma_side = side;
        }
    }
    const double tol = 1e-10 * (1.0 + operator_norm(w.matrix));
    if (best.residual > tol) {
        throw ConstructionMismatch("decompose_half: W - P - Q^Gamma residual " + std::to_string(best.residual),
                                   best.residual);
    }
    if (min_eigenvalue(p) < -1e-10 || min_eigenvalue(q) < -1e-10) {
        throw ConstructionMismatch("decompose_half: P or Q is not PSD", best.residual);
    }
    return best;
}

bool verify_decomposition(const Witness& w, const DecompositionCertificate& cert, const Tolerances& tol) {
    const auto size = w.matrix.rows();
    if (cert.p_part.rows() != size || cert.p_part.cols() != size || cert.q_part.rows() != size ||
        cert.q_part.cols() != size) {
        return false;
    }
    if (!is_hermitian(cert.p_part) || !is_hermitian(cert.q_part)) return false;
    if (min_eigenvalue(cert.p_part) < -1e-10 || min_eigenvalue(cert.q_part) < -1e-10) return false;
    const double residual =
        (w.matrix - cert.p_part - partial_transpose(cert.q_part, w.dims, cert.gamma_side)).norm();
    return residual <= tol.hermiticity * (1.0 + operator_norm(w.matrix));
}

DecompositionCertificate scale_certificate(const DecompositionCertificate& cert, double factor) {
    DecompositionCertificate out = cert;
    out.p_part *= factor;
    out.q_part *= factor;
    out.residual *= factor;
    return out;
}

ComplexMatrix project_density(const ComplexMatrix& a) {
    const auto solver = hermitian_solver(a);
    const RealVector w = project_simplex(solver.eigenvalues());
    const ComplexMatrix& v = solver.eigenvectors();
    return v * w.cast<Complex>().asDiagonal() * v.adjoint();
}

ComplexMatrix project_ppt(const ComplexMatrix& a, const BipartiteDims& dims) {
    const auto solver = hermitian_solver(partial_transpose(0.5 * (a + a.adjoint()), dims, Subsystem::B));
    const RealVector w = solver.eigenvalues().cwiseMax(0.0);
    const ComplexMatrix& v = solver.eigenvectors();
    return partial_transpose(v * w.cast<Complex>().asDiagonal() * v.adjoint(), dims, Subsystem::B);
}

PptSearchResult ppt_detection_search(const Witness& w, const PptSearchOptions& options) {
    const int total = w.dims.total();
    const auto spectrum = hermitian_spectrum(w.matrix);
    const double norm = std::max(std::abs(spectrum.min()), std::abs(spectrum.max()));
    PptSearchResult result;
    result.best.value = std::numeric_limits<double>::infinity();
    const ComplexMatrix mixed = ComplexMatrix::Identity(total, total) / static_cast<double>(total);

    for (int s = 0; s < std::max(1, options.budget); ++s) {
        ComplexMatrix rho = mixed;
        if (s > 0) {
            Rng rng = make_rng(options.seed, static_cast<std::uint64_t>(s));
            std::uniform_real_distribution<double> weight(0.1, 0.9);
            const ComplexVector v = spectrum.eigenvectors.col((s - 1) % total);
            const ComplexVector noise = random_unit_vector(total, rng);
            ComplexVector dir = v + 0.1 * noise;
            dir.normalize();
            const double t = weight(rng);
            rho = restore_feasibility((1.0 - t) * mixed + t * projector(dir), w.dims);
            rho = restore_feasibility(dykstra(rho, w.dims, options.projection_iterations), w.dims);
        }
        double value = (w.matrix * rho).trace().real();
        double step = norm > 0 ? 0.1 / norm : 0.1;
        for (int it = 0; it < options.max_iterations && step > 1e-14; ++it) {
            ComplexMatrix candidate = dykstra(rho - step * w.matrix, w.dims, options.projection_iterations);
            candidate = restore_feasibility(candidate, w.dims);
            const double v = (w.matrix * candidate).trace().real();
            if (v <= value) {
                const bool stalled = value - v < 1e-15;
                rho = std::move(candidate);
                value = v;
                if (stalled) step *= 0.5;
            } else {
                step *= 0.5;
            }
        }
        result.start_values.push_back(value);
        if (value < result.best.value) result.best = describe(w.matrix, rho, w.dims);
        ++result.starts;
    }
    if (result.best.value < -options.threshold) result.detection = result.best;
    return result;
}

}  // namespace ewlab
