#include "ewlab/posmaps.hpp"

#include "ewlab/seesaw.hpp"

#include <Eigen/QR>

#include <cmath>

namespace ewlab {

ElementaryMap::ElementaryMap(int in, int out, std::vector<ComplexMatrix> plus, std::vector<ComplexMatrix> minus)
    : in_dim(in), out_dim(out), plus_terms(std::move(plus)), minus_terms(std::move(minus)) {
    if (in_dim < 1 || out_dim < 1) {
        throw InvalidDims("ElementaryMap: dimensions must be positive");
    }
    if (plus_terms.empty()) {
        throw InvalidArgument("ElementaryMap: plus_terms must be nonempty");
    }
    auto check = [&](const ComplexMatrix& t) {
        if (t.rows() != out_dim || t.cols() != in_dim) {
            throw InvalidDims("ElementaryMap: term shape " + std::to_string(t.rows()) + "x" +
                              std::to_string(t.cols()) + " differs from " + std::to_string(out_dim) + "x" +
                              std::to_string(in_dim));
        }
        if (!t.allFinite()) throw InvalidArgument("ElementaryMap: non-finite entry");
    };
    for (const auto& t : plus_terms) check(t);
    for (const auto& t : minus_terms) check(t);
}

FamilySpec::FamilySpec(int n_, int k_) : n(n_), k(k_) {
    if (n < 3) throw InvalidArgument("family requires n >= 3, got " + std::to_string(n));
    if (k < 1 || k > n - 1) {
        throw InvalidArgument("family requires 1 <= k <= n-1, got k=" + std::to_string(k));
    }
}

ComplexMatrix apply_map(const ElementaryMap& phi, const ComplexMatrix& x) {
    if (x.rows() != phi.in_dim || x.cols() != phi.in_dim) {
        throw InvalidDims("apply_map: input must be " + std::to_string(phi.in_dim) + "x" +
                          std::to_string(phi.in_dim));
    }
    ComplexMatrix out = ComplexMatrix::Zero(phi.out_dim, phi.out_dim);
    for (const auto& c : phi.plus_terms) out += c * x * c.adjoint();
    for (const auto& d : phi.minus_terms) out -= d * x * d.adjoint();
    return out;
}

ElementaryMap phi_nk(const FamilySpec& spec) {
    const int n = spec.n;
    std::vector<ComplexMatrix> plus;
    plus.reserve(static_cast<std::size_t>(2 * n));
    const double weight = std::sqrt(static_cast<double>(n - 1));
    for (int i = 0; i < n; ++i) plus.push_back(weight * matrix_unit(n, n, i, i));
    for (int i = 0; i < n; ++i) plus.push_back(matrix_unit(n, n, i, spec.shift(i)));
    return ElementaryMap(n, n, std::move(plus), {ComplexMatrix::Identity(n, n)});
}

ComplexMatrix map_to_choi(const ElementaryMap& phi) {
    const int n = phi.in_dim;
    const int m = phi.out_dim;
    ComplexMatrix w(n * m, n * m);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            w.block(i * m, j * m, m, m) = apply_map(phi, matrix_unit(n, n, i, j));
        }
    }
    return w;
}

ElementaryMap choi_to_map(const ComplexMatrix& w, const BipartiteDims& dims, double drop_tol) {
    if (w.rows() != dims.total() || w.cols() != dims.total()) {
        throw InvalidDims("choi_to_map: matrix size does not match dims");
    }
    const HermitianSpectrum spec = hermitian_spectrum(w);
    std::vector<ComplexMatrix> plus;
    std::vector<ComplexMatrix> minus;
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
        const double lambda = spec.eigenvalues(i);
        if (std::abs(lambda) <= drop_tol) continue;
        ComplexMatrix term = std::sqrt(std::abs(lambda)) * vector_to_operator(spec.eigenvectors.col(i), dims);
        (lambda > 0 ? plus : minus).push_back(std::move(term));
    }
    if (plus.empty()) plus.push_back(ComplexMatrix::Zero(dims.dimB, dims.dimA));
    return ElementaryMap(dims.dimA, dims.dimB, std::move(plus), std::move(minus));
}

PositivityReport positivity_scan(const ElementaryMap& phi, int budget, std::uint64_t seed) {
    if (budget < 1) throw InvalidArgument("positivity_scan: budget must be >= 1");
    SeeSawProblem problem;
    problem.x_dim = phi.in_dim;
    problem.y_dim = phi.out_dim;
    problem.given_x = [&phi](const ComplexVector& x) { return apply_map(phi, projector(x)); };
    problem.given_y = [&phi](const ComplexVector& y) {
        const ComplexMatrix yy = projector(y);
        ComplexMatrix out = ComplexMatrix::Zero(phi.in_dim, phi.in_dim);
        for (const auto& c : phi.plus_terms) out += c.adjoint() * yy * c;
        for (const auto& d : phi.minus_terms) out -= d.adjoint() * yy * d;
        return out;
    };
    const auto starts = seesaw_starts(phi.in_dim, budget, seed);
    const auto runs = run_multistart(problem, starts);
    const auto& best = runs[best_run(runs)];
    PositivityReport report;
    report.min_value = best.value;
    report.argmin_x = best.x;
    report.argmin_y = best.y;
    report.restarts_used = static_cast<int>(runs.size());
    report.consistent_with_positive = best.value >= -1e-9;
    return report;
}

CoefficientSolve local_coefficients(const std::vector<ComplexMatrix>& targets,
                                    const std::vector<ComplexMatrix>& basis, const ComplexVector& probe) {
    if (basis.empty()) throw InvalidArgument("local_coefficients: empty basis");
    const Eigen::Index m = basis.front().rows();
    ComplexMatrix images(m, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].cols() != probe.size() || basis[i].rows() != m) {
            throw InvalidDims("local_coefficients: basis term shape mismatch");
        }
        images.col(static_cast<Eigen::Index>(i)) = basis[i] * probe;
    }
    ComplexMatrix rhs(m, static_cast<Eigen::Index>(targets.size()));
    for (std::size_t j = 0; j < targets.size(); ++j) {
        if (targets[j].cols() != probe.size() || targets[j].rows() != m) {
            throw InvalidDims("local_coefficients: target shape mismatch");
        }
        rhs.col(static_cast<Eigen::Index>(j)) = targets[j] * probe;
    }
    CoefficientSolve out;
    out.probe = probe;
    if (targets.empty()) {
        out.alpha = ComplexMatrix::Zero(0, images.cols());
        return out;
    }
    Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cod;
    const double scale = images.cwiseAbs().maxCoeff();
    cod.setThreshold(1e-13);
    cod.compute(scale > 0 ? images : ComplexMatrix::Zero(images.rows(), images.cols()));
    // Columns of `solution` are the coefficient vectors; alpha stores them as rows.
    const ComplexMatrix solution = scale > 0 ? ComplexMatrix(cod.solve(rhs))
                                             : ComplexMatrix::Zero(images.cols(), rhs.cols());
    out.alpha = solution.transpose();
    out.residual = (images * solution - rhs).norm();
    out.gram_norm = operator_norm(out.alpha * out.alpha.adjoint());
    return out;
}

FMatrixEvaluation fmatrix_evaluate(const ElementaryMap& phi, const ComplexMatrix& candidate,
                                   const ComplexVector& probe) {
    if (probe.size() != phi.in_dim) throw InvalidDims("fmatrix: probe length mismatch");
    if (candidate.rows() != phi.out_dim || candidate.cols() != phi.in_dim) {
        throw InvalidDims("fmatrix: candidate shape mismatch");
    }
    for (Eigen::Index i = 0; i < probe.size(); ++i) {
        if (probe(i) == Complex(0.0)) {
            throw InvalidArgument("fmatrix: unsupported probe (zero entry at index " + std::to_string(i) + ")");
        }
    }
    FMatrixEvaluation eval;
    eval.extrapolated = phi.minus_terms.size() > 1;
    // Rows are solved independently: each is its own least-norm problem.
    const CoefficientSolve minus = local_coefficients(phi.minus_terms, phi.plus_terms, probe);
    const CoefficientSolve cand = local_coefficients({candidate}, phi.plus_terms, probe);
    if (!cand.feasible()) {
        eval.candidate_feasible = false;
        eval.gram_norm = std::numeric_limits<double>::infinity();
        return eval;
    }
    ComplexMatrix f(minus.alpha.rows() + 1, minus.alpha.cols());
    f.topRows(minus.alpha.rows()) = minus.alpha;
    f.bottomRows(1) = cand.alpha;
    eval.gram_norm = operator_norm(f * f.adjoint());
    return eval;
}

double fmatrix_gram_norm(const ElementaryMap& phi, const ComplexMatrix& candidate, const ComplexVector& probe) {
    return fmatrix_evaluate(phi, candidate, probe).gram_norm;
}

ClosedFormCoefficients closed_form_coeffs_phi_n1(int n, const ComplexVector& probe) {
    if (probe.size() != n) throw InvalidDims("closed_form_coeffs_phi_n1: probe length mismatch");
    for (int i = 0; i < n; ++i) {
        if (probe(i) == Complex(0.0)) {
            throw InvalidArgument("closed_form_coeffs_phi_n1: zero probe entry at index " + std::to_string(i));
        }
    }
    const double root = std::sqrt(static_cast<double>(n - 1));
    ClosedFormCoefficients out{ComplexVector(n), ComplexVector(n)};
    for (int i = 0; i < n; ++i) {
        const Complex ratio = probe(i) / probe((i + 1) % n);
        const double r = std::norm(ratio);
        const double alpha = root * r / (1.0 + (n - 1) * r);
        out.alpha(i) = alpha;
        out.beta(i) = (1.0 - root * alpha) * ratio;
    }
    return out;
}

}  // namespace ewlab
