#include "ewlab/optimality.hpp"

#include "ewlab/parallel.hpp"
#include "ewlab/random.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace ewlab {

namespace {

// Random streams; offsets keep the draws of different stages apart.
constexpr std::uint64_t kRandomCandidates = 0xC0000;
constexpr std::uint64_t kComplementCandidates = 0xC8000;
constexpr std::uint64_t kDiagonalCandidates = 0xCC000;
constexpr std::uint64_t kCandidateSeeds = 0xE0000;
constexpr std::uint64_t kClimb = 0xD0000;
constexpr std::uint64_t kVerify = 0xF0000;
constexpr std::uint64_t kFamilyZeros = 0xFA000;
constexpr std::uint64_t kProbeStream = 0xB0000;

ComplexMatrix contract_x(const ComplexMatrix& w, int n, int m, const ComplexVector& x) {
    ComplexMatrix out = ComplexMatrix::Zero(m, m);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out += (std::conj(x(i)) * x(j)) * w.block(i * m, j * m, m, m);
    }
    return out;
}

ComplexMatrix contract_y(const ComplexMatrix& w, int n, int m, const ComplexVector& y) {
    ComplexMatrix out(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out(i, j) = y.dot(w.block(i * m, j * m, m, m) * y);
    }
    return out;
}

// Minimizer of <v|A|v> / |<b|v>|^2 for Hermitian A: v = A^{-1} b on the PSD part; the
// null-space (or a negative direction) wins whenever one overlaps b. Multi-scale probes make A
// strongly graded, so the solve runs on the Jacobi-equilibrated S A S.
ComplexVector ratio_minimizer(const ComplexMatrix& a, const ComplexVector& b) {
    const Eigen::Index dim = a.rows();
    RealVector s(dim);
    const double diag_max = a.diagonal().real().cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double d = std::abs(a(i, i).real());
        s(i) = d > 1e-300 * std::max(diag_max, 1e-300) ? 1.0 / std::sqrt(d) : 1.0;
    }
    const ComplexMatrix scaled = s.asDiagonal() * (0.5 * (a + a.adjoint())) * s.asDiagonal();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(scaled);
    const RealVector& lambda = solver.eigenvalues();
    const ComplexMatrix& v = solver.eigenvectors();
    const double scale = std::max(std::abs(lambda(0)), std::abs(lambda(dim - 1)));
    if (lambda(0) < -1e-14 * scale) {
        ComplexVector out = s.asDiagonal() * v.col(0);
        return out / out.norm();
    }
    const double floor = std::max(1e-15 * scale, 1e-300);
    const ComplexVector sb = s.asDiagonal() * b;
    ComplexVector z = ComplexVector::Zero(dim);
    for (Eigen::Index k = 0; k < dim; ++k) z += v.col(k) * (v.col(k).dot(sb) / std::max(lambda(k), floor));
    ComplexVector out = s.asDiagonal() * z;
    const double norm = out.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        out = s.asDiagonal() * v.col(0);
        return out / out.norm();
    }
    return out / norm;
}

struct RatioPoint {
    double ratio = std::numeric_limits<double>::infinity();
    ComplexVector x;
    ComplexVector y;
};

class RatioProblem {
 public:
    RatioProblem(const ComplexMatrix& w, const BipartiteDims& dims, const ComplexVector& c)
        : w_(w), n_(dims.dimA), m_(dims.dimB), c_(c), dims_(dims) {}

    double ratio(const ComplexVector& x, const ComplexVector& y) const {
        return subtraction_ratio(w_, dims_, c_, x, y);
    }

    RatioPoint from_x(const ComplexVector& x) const {
        ComplexVector b(m_);
        for (int a = 0; a < m_; ++a) {
            Complex s = 0.0;
            for (int i = 0; i < n_; ++i) s += c_(i * m_ + a) * std::conj(x(i));
            b(a) = s;
        }
        const ComplexVector y = ratio_minimizer(contract_x(w_, n_, m_, x), b);
        return {ratio(x, y), x, y};
    }

    RatioPoint from_y(const ComplexVector& y) const {
        ComplexVector b(n_);
        for (int i = 0; i < n_; ++i) {
            Complex s = 0.0;
            for (int a = 0; a < m_; ++a) s += c_(i * m_ + a) * std::conj(y(a));
            b(i) = s;
        }
        const ComplexVector x = ratio_minimizer(contract_y(w_, n_, m_, y), b);
        return {ratio(x, y), x, y};
    }

    // Alternating exact minimization of the ratio; keeps the best point seen.
    RatioPoint descend(RatioPoint start, int steps) const {
        RatioPoint best = start;
        RatioPoint cur = std::move(start);
        for (int s = 0; s < steps; ++s) {
            cur = from_x(cur.x);
            if (cur.ratio < best.ratio) best = cur;
            cur = from_y(cur.y);
            if (cur.ratio < best.ratio) best = cur;
        }
        return best;
    }

 private:
    const ComplexMatrix& w_;
    int n_;
    int m_;
    const ComplexVector& c_;
    BipartiteDims dims_;
};

bool better(const EpsilonEstimate& a, const EpsilonEstimate& b) {
    if (a.lower != b.lower) return a.lower > b.lower;
    return a.upper > b.upper;
}

ComplexMatrix complement_basis(const std::vector<ProductVector>& zeros, int total, double tol) {
    if (zeros.empty()) return ComplexMatrix::Identity(total, total);
    ComplexMatrix stacked(static_cast<Eigen::Index>(zeros.size()), total);
    for (std::size_t r = 0; r < zeros.size(); ++r) {
        const ComplexVector z = zeros[r].composite();
        stacked.row(static_cast<Eigen::Index>(r)) = (z / z.norm()).adjoint();
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(stacked, Eigen::ComputeFullV);
    const RealVector& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > tol * sv(0)) ++rank;
    }
    return svd.matrixV().rightCols(total - rank);
}

}  // namespace

SubtractionCheck subtract_and_check(const Witness& w, const ComplexMatrix& d, double epsilon, int budget,
                                    std::uint64_t seed, const Tolerances& tol) {
    if (d.rows() != w.matrix.rows() || d.cols() != w.matrix.cols()) {
        throw InvalidDims("subtract_and_check: D has the wrong size");
    }
    if (!(epsilon > 0.0)) throw InvalidArgument("subtract_and_check: epsilon must be positive");
    if (!is_hermitian(d) || min_eigenvalue(d) < -tol.hermiticity * (1.0 + operator_norm(d))) {
        throw InvalidArgument("subtract_and_check: D is not PSD");
    }
    const ComplexMatrix diff = w.matrix - epsilon * d;
    SubtractionCheck out;
    BlockMinOptions options;
    options.budget = budget;
    options.seed = seed;
    out.report = block_min(diff, w.dims, options);
    out.min_eigenvalue = min_eigenvalue(diff);
    out.still_block_positive = out.report.min_value >= block_floor(diff, tol);
    out.still_witness = out.still_block_positive && out.min_eigenvalue < -tol.hermiticity;
    return out;
}

std::vector<ComplexVector> multiscale_probes(int n, std::uint64_t seed) {
    std::vector<std::vector<int>> orders;
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    if (n <= 5) {
        do {
            orders.push_back(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        // Every arithmetic-progression ordering j, j + d, j + 2d, ... (continuing at the next
        // unvisited index when the progression closes early), then seeded shuffles.
        for (int step = 1; step < n; ++step) {
            for (int start = 0; start < n; ++start) {
                std::vector<int> order;
                std::vector<bool> seen(static_cast<std::size_t>(n), false);
                int cur = start;
                for (int t = 0; t < n; ++t) {
                    order.push_back(cur);
                    seen[static_cast<std::size_t>(cur)] = true;
                    int next = (cur + step) % n;
                    while (t + 1 < n && seen[static_cast<std::size_t>(next)]) next = (next + 1) % n;
                    cur = next;
                }
                orders.push_back(std::move(order));
            }
        }
        Rng rng = make_rng(seed, kProbeStream);
        for (int t = 0; t < 120; ++t) {
            std::shuffle(perm.begin(), perm.end(), rng);
            orders.push_back(perm);
        }
    }
    std::vector<ComplexVector> probes;
    std::uint64_t stream = kProbeStream + 1;
    for (double s : {1e1, 1e2, 1e3, 1e4, 1e5}) {
        if (std::pow(s, n - 1) > 1e24) continue;
        for (const auto& order : orders) {
            ComplexVector x(n);
            for (int t = 0; t < n; ++t) x(order[static_cast<std::size_t>(t)]) = std::pow(s, -t);
            probes.push_back(x / x.norm());
            Rng rng = make_rng(seed, stream++);
            ComplexVector phased = x.cwiseProduct(random_phase_vector(n, rng));
            probes.push_back(phased / phased.norm());
        }
    }
    return probes;
}

double subtraction_ratio(const ComplexMatrix& w, const BipartiteDims& dims, const ComplexVector& c,
                         const ComplexVector& x, const ComplexVector& y) {
    (void)dims;
    const ComplexVector xy = tensor(x, y);
    const double overlap = std::norm(c.dot(xy));
    if (!(overlap > 0.0)) return std::numeric_limits<double>::infinity();
    // Multi-scale products carry overlaps far below 1e-16, so the value is padded by a bound
    // on its rounding error; the result stays an upper bound on the true ratio.
    const RealVector mag = xy.cwiseAbs();
    const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * mag.dot(w.cwiseAbs() * mag);
    return (expectation(w, xy) + rounding) / overlap;
}

EpsilonEstimate estimate_epsilon(const ComplexMatrix& w, const BipartiteDims& dims, const ComplexVector& c,
                                 const std::vector<ProductVector>& pool,
                                 const std::vector<ComplexVector>& probes, const RankOneSearchOptions& options,
                                 std::uint64_t seed) {
    const RatioProblem problem(w, dims, c);
    EpsilonEstimate est;
    est.upper = std::max(w.trace().real(), 0.0);
    RatioPoint best;
    auto consider = [&](RatioPoint p) {
        if (p.ratio < best.ratio) best = std::move(p);
    };

    // Explicit product vectors bound epsilon* from above.
    for (const auto& pv : pool) consider({problem.ratio(pv.x, pv.y), pv.x, pv.y});
    if (std::min(best.ratio, est.upper) > options.threshold) {
        for (const auto& probe : probes) {
            if (probe.size() == dims.dimA) consider(problem.from_x(probe));
            if (probe.size() == dims.dimB) consider(problem.from_y(probe));
        }
        if (std::isfinite(best.ratio)) consider(problem.descend(best, 10));
    }
    est.upper = std::max(0.0, std::min(est.upper, best.ratio));
    if (est.upper <= options.threshold) return est;

    // Bisection on [0, upper] with the block-positivity scan as oracle. A negative scan gives
    // a product vector whose ratio replaces the midpoint as the new upper end.
    est.bisected = true;
    std::vector<ComplexVector> warm;
    if (best.x.size() == dims.dimA) warm.push_back(best.x);
    double lo = 0.0;
    double hi = est.upper;
    for (int t = 0; t < options.bisection_iterations; ++t) {
        if (hi - lo <= 1e-3 * hi || hi <= options.threshold) break;
        const double mid = 0.5 * (lo + hi);
        const ComplexMatrix shifted = w - mid * projector(c);
        BlockMinOptions oracle;
        oracle.budget = options.oracle_restarts;
        oracle.seed = derive_seed(seed, static_cast<std::uint64_t>(t));
        oracle.extra_starts = warm;
        const BlockPositivityReport report = block_min(shifted, dims, oracle);
        ++est.oracle_calls;
        if (report.min_value < block_floor(shifted, options.tol)) {
            RatioPoint found{problem.ratio(report.argmin_x, report.argmin_y), report.argmin_x, report.argmin_y};
            found = problem.descend(found, 3);
            hi = std::max(0.0, std::min(mid, found.ratio));
            lo = std::min(lo, hi);
            warm.push_back(found.x);
            if (warm.size() > 8) warm.erase(warm.begin() + 1);
        } else {
            lo = mid;
        }
    }
    est.lower = lo;
    est.upper = hi;
    return est;
}

SpanReport spanning_dimension(const Witness& w, int budget, std::uint64_t seed, const Tolerances& tol) {
    BlockMinOptions options;
    options.budget = budget;
    options.seed = seed;
    options.seesaw.polish = true;
    const auto runs = block_min_runs(w.matrix, w.dims, options);
    SpanReport report;
    report.ambient = w.dims.total();
    for (const auto& run : runs) {
        if (!run.polished) continue;
        const double value = product_expectation(w.matrix, w.dims, run.x, run.y);
        if (std::abs(value) <= tol.block_positivity) {
            report.collected.push_back({run.x, run.y, value});
            ++report.from_search;
        }
    }
    if (w.family && w.dims.dimA == w.family->n && w.dims.dimB == w.family->n) {
        const int n = w.family->n;
        const int count = n * n + n;
        for (int t = 0; t < count; ++t) {
            RealVector theta = RealVector::Zero(n);
            if (t > 0) {
                Rng rng = make_rng(seed, kFamilyZeros + static_cast<std::uint64_t>(t));
                std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
                for (int i = 0; i < n; ++i) theta(i) = angle(rng);
            }
            auto [x, y] = zero_family_phi(n, theta);
            x /= x.norm();
            y /= y.norm();
            const double value = product_expectation(w.matrix, w.dims, x, y);
            if (std::abs(value) <= tol.block_positivity) {
                report.collected.push_back({x, y, value});
                ++report.from_family;
            }
        }
    }
    std::vector<ComplexVector> composite;
    composite.reserve(report.collected.size());
    for (const auto& pv : report.collected) composite.push_back(pv.composite());
    report.rank = numerical_rank(composite, tol.rank);
    report.spanning = report.rank == report.ambient;
    return report;
}

RankOneSearchResult rank_one_search(const Witness& w, const RankOneSearchOptions& options) {
    const BipartiteDims& dims = w.dims;
    const int n = dims.dimA;
    const int m = dims.dimB;
    const int total = dims.total();
    RankOneSearchResult result;

    std::vector<ProductVector> zeros;
    if (options.known_zeros) {
        zeros = *options.known_zeros;
    } else {
        zeros = spanning_dimension(w, options.budget, derive_seed(options.seed, 1), options.tol).collected;
    }
    const ComplexMatrix complement = complement_basis(zeros, total, options.tol.rank);
    const bool proper_complement = complement.cols() > 0 && complement.cols() < total;

    std::vector<ComplexVector> probes = multiscale_probes(n, derive_seed(options.seed, 2));
    if (m != n) {
        for (auto& p : multiscale_probes(m, derive_seed(options.seed, 3))) probes.push_back(std::move(p));
    }

    std::vector<std::pair<std::string, ComplexVector>> candidates;
    auto add = [&](std::string origin, const ComplexVector& v) {
        const double norm = v.norm();
        if (norm > 1e-12) candidates.emplace_back(std::move(origin), v / norm);
    };
    for (const auto& c : options.seed_candidates) add("seed", c);
    for (Eigen::Index j = 0; j < complement.cols(); ++j) add("complement", complement.col(j));
    {
        const auto spectrum = hermitian_spectrum(w.matrix);
        for (int j = 0; j < total; ++j) add("eigenvector", spectrum.eigenvectors.col(j));
    }
    for (int a = 0; a < m; ++a) {
        for (int j = 0; j < n; ++j) add("unit", operator_to_vector(matrix_unit(m, n, a, j)));
    }
    if (n == m) {
        for (int i = 0; i + 1 < n; ++i) {
            ComplexMatrix d = ComplexMatrix::Zero(n, n);
            d(i, i) = 1.0;
            d(i + 1, i + 1) = -1.0;
            add("diag_trace_zero", operator_to_vector(d));
        }
        for (int t = 0; t < 4; ++t) {
            Rng rng = make_rng(options.seed, kDiagonalCandidates + static_cast<std::uint64_t>(t));
            ComplexVector diag = random_unit_vector(n, rng);
            diag.array() -= diag.mean();
            add("diag_trace_zero", operator_to_vector(ComplexMatrix(diag.asDiagonal())));
        }
    }
    for (int t = 0; t < options.budget; ++t) {
        Rng rng = make_rng(options.seed, kRandomCandidates + static_cast<std::uint64_t>(t));
        add("random", random_unit_vector(total, rng));
    }
    if (proper_complement) {
        for (int t = 0; t < options.budget / 4; ++t) {
            Rng rng = make_rng(options.seed, kComplementCandidates + static_cast<std::uint64_t>(t));
            add("random_complement", complement * random_unit_vector(static_cast<int>(complement.cols()), rng));
        }
    }

    const std::size_t seeded = options.seed_candidates.size();
    bool have_best = false;
    for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
        const auto& [origin, c] = candidates[idx];
        CandidateScore score{origin, c,
                             estimate_epsilon(w.matrix, dims, c, zeros, probes, options,
                                              derive_seed(options.seed, kCandidateSeeds + idx))};
        ++result.candidates_evaluated;
        if (score.estimate.bisected) ++result.bisections_run;
        if (idx < seeded) result.seeded.push_back(score);
        if (!have_best || better(score.estimate, result.best.estimate)) {
            result.best = std::move(score);
            have_best = true;
        }
    }

    // Local perturbation hill climbing on the lower estimate.
    double sigma = 0.3;
    for (int step = 0; step < options.hill_climb_steps && have_best; ++step) {
        Rng rng = make_rng(options.seed, kClimb + static_cast<std::uint64_t>(step));
        ComplexVector g = random_unit_vector(total, rng);
        if (proper_complement) g = complement * (complement.adjoint() * g);
        if (g.norm() < 1e-12) break;
        ComplexVector c = result.best.direction + sigma * g / g.norm();
        c.normalize();
        CandidateScore score{result.best.origin, c,
                             estimate_epsilon(w.matrix, dims, c, zeros, probes, options,
                                              derive_seed(options.seed, kClimb + 0x100 + step))};
        ++result.candidates_evaluated;
        if (score.estimate.bisected) ++result.bisections_run;
        if (score.estimate.lower > result.best.estimate.lower) {
            if (score.origin.find("+climb") == std::string::npos) score.origin += "+climb";
            result.best = std::move(score);
            sigma = std::min(1.0, sigma * 1.5);
        } else {
            sigma *= 0.5;
        }
    }

    if (have_best && result.best.estimate.lower > options.threshold) {
        const ComplexMatrix d = projector(result.best.direction);
        double epsilon = result.best.estimate.lower;
        for (int attempt = 0; attempt < 5 && epsilon > options.threshold; ++attempt) {
            const SubtractionCheck check = subtract_and_check(
                w, d, epsilon, options.budget, derive_seed(options.seed, kVerify + attempt), options.tol);
            if (check.still_block_positive && check.still_witness) {
                result.certificate = NonOptimalityCertificate{d,       result.best.direction, epsilon,
                                                              check.report, check.min_eigenvalue,
                                                              result.best.origin};
                break;
            }
            epsilon *= 0.5;
        }
    }
    return result;
}

std::pair<ComplexVector, ComplexVector> zero_family_phi(int n, const RealVector& thetas) {
    if (thetas.size() != n) throw InvalidDims("zero_family_phi: need n angles");
    ComplexVector x(n);
    ComplexVector y(n);
    for (int j = 0; j < n; ++j) {
        x(j) = std::polar(1.0, thetas(j));
        y(j) = std::polar(1.0, -thetas(j));
    }
    return {x, y};
}

bool unit_corner_norm_exceeds(const ComplexMatrix& f) {
    if (f.rows() != 2 || f.cols() != 2) throw InvalidArgument("unit_corner_norm_exceeds: F must be 2x2");
    if (!is_hermitian(f)) throw InvalidArgument("unit_corner_norm_exceeds: F is not Hermitian");
    if (std::abs(f(0, 0) - Complex(1.0)) > 1e-10) {
        throw InvalidArgument("unit_corner_norm_exceeds: F(1,1) must equal 1");
    }
    if (min_eigenvalue(f) < -1e-10) throw InvalidArgument("unit_corner_norm_exceeds: F is not PSD");
    return operator_norm(f) > 1.0 + 1e-12;
}

std::vector<std::pair<std::string, ComplexMatrix>> fmatrix_candidate_mesh(int n, int m, std::uint64_t seed) {
    std::vector<std::pair<std::string, ComplexMatrix>> base;
    if (n == m) base.emplace_back("identity", ComplexMatrix::Identity(n, n));
    base.emplace_back("unit_offdiag_12", matrix_unit(m, n, 0, 1));
    base.emplace_back("unit_offdiag_21", matrix_unit(m, n, 1, 0));
    for (int t = 0; t < 2; ++t) {
        Rng rng = make_rng(seed, 0xA000 + static_cast<std::uint64_t>(t));
        ComplexMatrix g = random_gaussian_matrix(m, n, rng);
        base.emplace_back("random_" + std::to_string(t), g / g.norm());
    }
    if (n == m) {
        for (int i = 0; i + 1 < n; ++i) {
            ComplexMatrix d = ComplexMatrix::Zero(n, n);
            d(i, i) = 1.0;
            d(i + 1, i + 1) = -1.0;
            base.emplace_back("diag_trace_zero_" + std::to_string(i), d / std::sqrt(2.0));
        }
        for (int t = 0; t < 2; ++t) {
            Rng rng = make_rng(seed, 0xA100 + static_cast<std::uint64_t>(t));
            ComplexVector diag = random_unit_vector(n, rng);
            diag.array() -= diag.mean();
            base.emplace_back("diag_trace_zero_random_" + std::to_string(t),
                              ComplexMatrix(diag.asDiagonal()) / diag.norm());
        }
    }
    std::vector<std::pair<std::string, ComplexMatrix>> mesh;
    for (double scale : {1.0, 0.1}) {
        for (const auto& [label, c] : base) {
            mesh.emplace_back(label + "@" + (scale == 1.0 ? "1" : "0.1"), scale * c);
        }
    }
    return mesh;
}

FMatrixEvidence fmatrix_evidence(const ElementaryMap& phi, int probe_mesh, std::uint64_t seed, bool extrapolated,
                                 const std::optional<FamilySpec>& family) {
    const int n = phi.in_dim;
    FMatrixEvidence evidence;
    evidence.probes_per_candidate = probe_mesh;
    evidence.extrapolated = extrapolated || phi.minus_terms.size() > 1;
    std::vector<std::vector<int>> staircases;
    if (family && family->n == n) {
        for (int dir : {1, -1}) {
            for (int start = 0; start < n; ++start) {
                // Follows i -> i + dir k; when the cycle closes early (gcd(n, k) > 1) it
                // continues from the next unvisited index.
                std::vector<int> order;
                std::vector<bool> seen(static_cast<std::size_t>(n), false);
                int cur = start;
                for (int t = 0; t < n; ++t) {
                    order.push_back(cur);
                    seen[static_cast<std::size_t>(cur)] = true;
                    int next = ((cur + dir * family->k) % n + n) % n;
                    while (t + 1 < n && seen[static_cast<std::size_t>(next)]) next = (next + 1) % n;
                    cur = next;
                }
                staircases.push_back(std::move(order));
            }
        }
    }
    constexpr std::array<double, 3> scales{1e2, 1e3, 1e4};
    const std::size_t structured = staircases.size() * scales.size();
    const auto mesh = fmatrix_candidate_mesh(n, phi.out_dim, seed);
    evidence.candidates.resize(mesh.size());
    parallel_for(mesh.size(), [&](std::size_t ci) {
        CandidateEvidence ev;
        ev.label = mesh[ci].first;
        ev.candidate = mesh[ci].second;
        ev.max_gram_norm = -std::numeric_limits<double>::infinity();
        std::vector<int> perm(static_cast<std::size_t>(n));
        for (int p = 0; p < probe_mesh; ++p) {
            Rng rng = make_rng(seed, kProbeStream + (static_cast<std::uint64_t>(ci) << 20) + p);
            ComplexVector probe(n);
            switch (p % 3) {
                case 0:  // all moduli equal
                    probe = random_phase_vector(n, rng);
                    break;
                case 1: {  // moduli ratios growing geometrically along an ordering
                    const auto t = static_cast<std::size_t>(p / 3);
                    ComplexVector phases = ComplexVector::Ones(n);
                    if (t < structured) {
                        perm = staircases[t % staircases.size()];
                    } else {
                        std::iota(perm.begin(), perm.end(), 0);
                        std::shuffle(perm.begin(), perm.end(), rng);
                        phases = random_phase_vector(n, rng);
                    }
                    const double s = scales[(t < structured ? t / staircases.size() : t) % scales.size()];
                    for (int r = 0; r < n; ++r) {
                        const auto idx = perm[static_cast<std::size_t>(r)];
                        probe(idx) = std::pow(s, -r) * phases(idx);
                    }
                    break;
                }
                default:
                    probe = random_unit_vector(n, rng);
                    break;
            }
            const FMatrixEvaluation eval = fmatrix_evaluate(phi, ev.candidate, probe);
            ++ev.probes;
            if (eval.gram_norm > 1.0 + 1e-9) ++ev.probes_exceeding;
            if (eval.gram_norm > ev.max_gram_norm) {
                ev.max_gram_norm = eval.gram_norm;
                ev.best_probe = probe;
            }
        }
        ev.exceeds = ev.max_gram_norm > 1.0 + 1e-9;
        evidence.candidates[ci] = std::move(ev);
    });
    evidence.all_exceed = std::all_of(evidence.candidates.begin(), evidence.candidates.end(),
                                      [](const CandidateEvidence& e) { return e.exceeds; });
    return evidence;
}

std::string verdict_name(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::CertifiedNonOptimal:
            return "non_optimal";
        case VerdictKind::SpanningOptimal:
            return "spanning_optimal";
        case VerdictKind::NoCertificateFound:
            return "no_certificate";
    }
    return "no_certificate";
}

std::string verdict_label(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::CertifiedNonOptimal:
            return "certified non-optimal";
        case VerdictKind::SpanningOptimal:
            return "optimal (spanning property)";
        case VerdictKind::NoCertificateFound:
            return "consistent with optimal";
    }
    return "consistent with optimal";
}

OptimalityVerdict optimality_report(const Witness& w, const OptimalityConfig& config) {
    OptimalityVerdict verdict;
    verdict.span = spanning_dimension(w, config.restarts, derive_seed(config.seed, 1), config.tol);
    if (verdict.span.spanning) {
        verdict.kind = VerdictKind::SpanningOptimal;
        return verdict;
    }
    RankOneSearchOptions search;
    search.budget = config.search_budget;
    search.seed = derive_seed(config.seed, 2);
    search.known_zeros = verdict.span.collected;
    search.tol = config.tol;
    search.threshold = config.tol.certificate;
    verdict.search = rank_one_search(w, search);
    if (verdict.search->certificate) {
        verdict.kind = VerdictKind::CertifiedNonOptimal;
        verdict.certificate = verdict.search->certificate;
        return verdict;
    }
    verdict.kind = VerdictKind::NoCertificateFound;
    if (w.family) {
        verdict.fmatrix =
            fmatrix_evidence(phi_nk(*w.family), config.probe_mesh, derive_seed(config.seed, 3), false, w.family);
    } else {
        verdict.fmatrix = fmatrix_evidence(choi_to_map(w.matrix, w.dims), config.probe_mesh,
                                           derive_seed(config.seed, 3), true);
    }
    return verdict;
}

}  // namespace ewlab
