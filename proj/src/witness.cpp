#include "ewlab/witness.hpp"

#include <array>
#include <cmath>

namespace ewlab {

Witness::Witness(ComplexMatrix m, BipartiteDims d, bool is_normalized, std::optional<FamilySpec> fam)
    : matrix(std::move(m)), dims(d), normalized(is_normalized), family(fam) {
    if (matrix.rows() != dims.total() || matrix.cols() != dims.total()) {
        throw InvalidDims("Witness: matrix is " + std::to_string(matrix.rows()) + "x" +
                          std::to_string(matrix.cols()) + " but dims give " + std::to_string(dims.total()));
    }
    if (!matrix.allFinite()) throw InvalidArgument("Witness: non-finite entry");
    if (!is_hermitian(matrix)) {
        const double asym = max_asymmetry(matrix);
        throw HermiticityViolation("Witness: matrix is not Hermitian (max asymmetry " +
                                       std::to_string(asym) + ")",
                                   asym);
    }
}

Witness family_witness(const FamilySpec& spec, bool normalize_trace) {
    ComplexMatrix w = map_to_choi(phi_nk(spec));
    if (normalize_trace) w /= spec.trace_scale();
    return Witness(std::move(w), BipartiteDims(spec.n, spec.n), normalize_trace, spec);
}

double product_expectation(const ComplexMatrix& w, const BipartiteDims& dims, const ComplexVector& x,
                           const ComplexVector& y) {
    if (x.size() != dims.dimA || y.size() != dims.dimB) {
        throw InvalidDims("product_expectation: vector length mismatch");
    }
    return expectation(w, tensor(x, y));
}

SeeSawProblem product_form_problem(const ComplexMatrix& w, const BipartiteDims& dims) {
    const int n = dims.dimA;
    const int m = dims.dimB;
    SeeSawProblem problem;
    problem.x_dim = n;
    problem.y_dim = m;
    // Capture by value: problems outlive temporaries in callers.
    problem.given_x = [w, n, m](const ComplexVector& x) {
        ComplexMatrix out = ComplexMatrix::Zero(m, m);
        for (int i = 0; i < n; ++i) {
            const Complex xi = std::conj(x(i));
            if (xi == Complex(0.0)) continue;
            for (int j = 0; j < n; ++j) {
                if (x(j) == Complex(0.0)) continue;
                out += (xi * x(j)) * w.block(i * m, j * m, m, m);
            }
        }
        return out;
    };
    problem.given_y = [w, n, m](const ComplexVector& y) {
        ComplexMatrix out(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                out(i, j) = y.dot(w.block(i * m, j * m, m, m) * y);
            }
        }
        return out;
    };
    return problem;
}

std::vector<SeeSawRun> block_min_runs(const ComplexMatrix& w, const BipartiteDims& dims,
                                      const BlockMinOptions& options) {
    if (options.budget < 0) throw InvalidArgument("block_min: negative budget");
    if (w.rows() != dims.total() || w.cols() != dims.total()) {
        throw InvalidDims("block_min: matrix size does not match dims");
    }
    std::vector<ComplexVector> starts = options.extra_starts;
    for (auto& s : seesaw_starts(dims.dimA, options.budget, options.seed)) starts.push_back(std::move(s));
    return run_multistart(product_form_problem(w, dims), starts, options.seesaw);
}

BlockPositivityReport summarize_runs(const std::vector<SeeSawRun>& runs) {
    BlockPositivityReport report;
    if (runs.empty()) return report;
    const auto& best = runs[best_run(runs)];
    report.min_value = best.value;
    report.argmin_x = best.x;
    report.argmin_y = best.y;
    report.restarts_used = static_cast<int>(runs.size());
    report.converged_iterations.reserve(runs.size());
    for (const auto& r : runs) report.converged_iterations.push_back(r.iterations);
    return report;
}

BlockPositivityReport block_min(const ComplexMatrix& w, const BipartiteDims& dims, const BlockMinOptions& options) {
    BlockPositivityReport report = summarize_runs(block_min_runs(w, dims, options));
    // Report the exact expectation at the returned vectors.
    report.min_value = product_expectation(w, dims, report.argmin_x, report.argmin_y);
    return report;
}

BlockPositivityReport block_min(const Witness& w, int budget, std::uint64_t seed) {
    BlockMinOptions options;
    options.budget = budget;
    options.seed = seed;
    return block_min(w.matrix, w.dims, options);
}

double block_floor(const ComplexMatrix& w, const Tolerances& tol) {
    return -tol.block_positivity * (1.0 + operator_norm(w));
}

ValidationReport validate_witness(const Witness& w, int budget, std::uint64_t seed, const Tolerances& tol) {
    ValidationReport report;
    report.max_asymmetry = max_asymmetry(w.matrix);
    report.hermitian = is_hermitian(w.matrix, tol.hermiticity);
    if (!report.hermitian) return report;
    report.min_eigenvalue = min_eigenvalue(w.matrix, tol.hermiticity);
    report.has_negative_eigenvalue = report.min_eigenvalue < -tol.hermiticity;
    report.block = block_min(w, budget, seed);
    report.block_positive = report.block.min_value >= block_floor(w.matrix, tol);
    report.is_witness = report.hermitian && report.has_negative_eigenvalue && report.block_positive;
    return report;
}

double detects(const Witness& w, const ComplexMatrix& rho) {
    if (rho.rows() != w.matrix.rows() || rho.cols() != w.matrix.cols()) {
        throw InvalidDims("detects: state dimension mismatch");
    }
    if (!is_hermitian(rho) || std::abs(rho.trace().real() - 1.0) > 1e-10 || min_eigenvalue(rho) < -1e-10) {
        throw InvalidArgument("detects: rho is not a density matrix");
    }
    return (w.matrix * rho).trace().real();
}

Witness normalize(const Witness& w) {
    const double tr = w.trace();
    if (!(tr > 0.0)) {
        throw InvalidArgument("normalize: trace must be positive, got " + std::to_string(tr));
    }
    return Witness(w.matrix / tr, w.dims, true, w.family);
}

PptCheck ppt_check(const ComplexMatrix& rho, const BipartiteDims& dims, double tol) {
    PptCheck out;
    out.min_pt_eigenvalue = min_eigenvalue(partial_transpose(rho, dims, Subsystem::B));
    out.ppt = out.min_pt_eigenvalue >= -tol;
    return out;
}

double spa_boundary(double lambda, const BipartiteDims& dims) {
    return 1.0 / (1.0 + dims.total() * lambda);
}

ComplexMatrix spa_mixture(const Witness& w, double p) {
    const int total = w.dims.total();
    return (1.0 - p) * ComplexMatrix::Identity(total, total) / static_cast<double>(total) + p * w.matrix;
}

SpaResult spa(const Witness& w, int budget, std::uint64_t seed) {
    if (!w.normalized || std::abs(w.trace() - 1.0) > 1e-10) {
        throw InvalidArgument("spa: witness must be normalized to unit trace first");
    }
    const ValidationReport v = validate_witness(w, budget, seed);
    if (!v.has_negative_eigenvalue) throw NotAWitness("spa: operator has no negative eigenvalue");
    if (!v.block_positive) throw NotAWitness("spa: operator fails the block-positivity scan");
    SpaResult out;
    out.lambda = -v.min_eigenvalue;
    out.p_star = spa_boundary(out.lambda, w.dims);
    out.spa_state = spa_mixture(w, out.p_star);
    out.min_eigenvalue = min_eigenvalue(out.spa_state);
    const PptCheck ppt = ppt_check(out.spa_state, w.dims);
    out.min_pt_eigenvalue = ppt.min_pt_eigenvalue;
    out.ppt = ppt.ppt;
    return out;
}

ComplexMatrix embed_block(const TwoQubitBlock& block, int n) {
    const std::array<int, 4> index = {block.first * n + block.first, block.first * n + block.second,
                                      block.second * n + block.first, block.second * n + block.second};
    ComplexMatrix out = ComplexMatrix::Zero(n * n, n * n);
    for (int p = 0; p < 4; ++p) {
        for (int q = 0; q < 4; ++q) out(index[p], index[q]) += block.block(p, q);
    }
    return out;
}

SeparabilityCertificate spa_separability_certificate(const FamilySpec& spec) {
    if (spec.is_half()) {
        throw InvalidArgument("spa_separability_certificate: requires k != n/2");
    }
    const int n = spec.n;
    const Witness w = family_witness(spec, true);
    const double lambda = -min_eigenvalue(w.matrix);
    SeparabilityCertificate cert;
    cert.spec = spec;
    cert.p_star = spa_boundary(lambda, w.dims);
    cert.scale = static_cast<double>(n) * (2 * n - 1);
    const ComplexMatrix state = spa_mixture(w, cert.p_star);

    // Orbit pairs {i, i+k} first, then every other pair: the state couples |ii> and |jj> for all i != j.
    std::vector<std::pair<int, int>> pairs;
    std::vector<std::vector<bool>> covered(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
        const int j = spec.shift(i);
        pairs.emplace_back(i, j);
        covered[i][j] = covered[j][i] = true;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!covered[i][j]) pairs.emplace_back(i, j);
        }
    }

    RealVector used = RealVector::Zero(n * n);
    const BipartiteDims two(2, 2);
    for (const auto& [i, j] : pairs) {
        TwoQubitBlock blk;
        blk.first = i;
        blk.second = j;
        const std::array<int, 4> index = {i * n + i, i * n + j, j * n + i, j * n + j};
        blk.block = ComplexMatrix::Zero(4, 4);
        for (int p = 0; p < 4; ++p) {
            for (int q = 0; q < 4; ++q) {
                if (p != q) blk.block(p, q) = state(index[p], index[q]);
            }
        }
        // |ii> and |jj> are shared with the other blocks through i and j: take just enough weight
        // to make the coherence PSD. |ij> and |ji> belong to this block alone.
        const double coherence = std::abs(state(index[0], index[3]));
        blk.block(0, 0) = coherence;
        blk.block(3, 3) = coherence;
        blk.block(1, 1) = state(index[1], index[1]);
        blk.block(2, 2) = state(index[2], index[2]);
        for (int p = 0; p < 4; ++p) used(index[p]) += blk.block(p, p).real();

        blk.min_eigenvalue = min_eigenvalue(blk.block);
        blk.min_pt_eigenvalue = min_eigenvalue(partial_transpose(blk.block, two, Subsystem::B));
        blk.psd_ok = blk.min_eigenvalue >= -1e-10;
        blk.ppt_ok = blk.min_pt_eigenvalue >= -1e-10;
        cert.blocks.push_back(std::move(blk));
    }

    ComplexMatrix rebuilt = ComplexMatrix::Zero(n * n, n * n);
    bool weights_ok = true;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const int idx = a * n + b;
            const double weight = state(idx, idx).real() - used(idx);
            if (std::abs(weight) <= 1e-15) continue;
            cert.diagonal_part.push_back({weight, a, b});
            rebuilt(idx, idx) += weight;
            if (weight < -1e-12) weights_ok = false;
        }
    }
    for (const auto& blk : cert.blocks) rebuilt += embed_block(blk, n);
    cert.reconstruction_residual = (state - rebuilt).norm();
    if (cert.reconstruction_residual > 1e-10) {
        throw CertificateFailure("spa_separability_certificate: reconstruction residual " +
                                     std::to_string(cert.reconstruction_residual),
                                 cert.reconstruction_residual);
    }
    cert.ok = weights_ok;
    for (const auto& blk : cert.blocks) cert.ok = cert.ok && blk.psd_ok && blk.ppt_ok;
    return cert;
}

}  // namespace ewlab
