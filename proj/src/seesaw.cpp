#include "ewlab/seesaw.hpp"

#include "ewlab/parallel.hpp"
#include "ewlab/random.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace ewlab {

namespace {

struct MinPair {
    double value;
    ComplexVector vector;
};

MinPair min_eigenpair(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (m + m.adjoint()));
    return {solver.eigenvalues()(0), solver.eigenvectors().col(0)};
}

// Removes the global phase ambiguity of an eigenvector relative to `reference`.
ComplexVector align_phase(const ComplexVector& v, const ComplexVector& reference) {
    const Complex overlap = reference.dot(v);
    const double mag = std::abs(overlap);
    if (mag == 0.0) return v;
    return v * std::conj(overlap / mag);
}

constexpr std::uint64_t kPhaseStream = 0x5eed0000ULL;

}  // namespace

SeeSawRun run_seesaw(const SeeSawProblem& problem, const ComplexVector& x0,
                     const SeeSawOptions& options) {
    SeeSawRun run;
    run.x = x0 / x0.norm();
    run.y = ComplexVector::Zero(problem.y_dim);
    double previous = std::numeric_limits<double>::infinity();
    const int cap = options.polish ? options.max_iterations + options.polish_max_iterations
                                   : options.max_iterations;
    bool objective_settled = false;
    for (int it = 0; it < cap; ++it) {
        MinPair ystep = min_eigenpair(problem.given_x(run.x));
        ComplexVector y = align_phase(ystep.vector, run.y);
        if (options.record_history) run.history.push_back(ystep.value);
        MinPair xstep = min_eigenpair(problem.given_y(y));
        ComplexVector x = align_phase(xstep.vector, run.x);
        if (options.record_history) run.history.push_back(xstep.value);

        const double change = (x - run.x).norm() + (y - run.y).norm();
        run.x = std::move(x);
        run.y = std::move(y);
        run.value = xstep.value;
        run.iterations = it + 1;

        if (!objective_settled && std::abs(previous - run.value) < options.objective_tol) {
            objective_settled = true;
            run.converged = true;
            if (!options.polish) break;
        }
        if (options.polish && change < options.polish_tol) {
            run.polished = true;
            run.converged = true;
            break;
        }
        if (!objective_settled && it + 1 >= options.max_iterations) break;
        previous = run.value;
    }
    return run;
}

std::vector<ComplexVector> seesaw_starts(int x_dim, int random_count, std::uint64_t seed) {
    std::vector<ComplexVector> starts;
    starts.reserve(static_cast<std::size_t>(2 * x_dim + 1 + random_count));
    for (int i = 0; i < x_dim; ++i) {
        starts.push_back(ComplexVector::Unit(x_dim, i));
    }
    starts.push_back(ComplexVector::Ones(x_dim) / std::sqrt(static_cast<double>(x_dim)));
    for (int j = 0; j < x_dim; ++j) {
        Rng rng = make_rng(seed, kPhaseStream + static_cast<std::uint64_t>(j));
        ComplexVector v = random_phase_vector(x_dim, rng);
        starts.push_back(v / v.norm());
    }
    for (int r = 0; r < random_count; ++r) {
        Rng rng = make_rng(seed, static_cast<std::uint64_t>(r));
        starts.push_back(random_unit_vector(x_dim, rng));
    }
    return starts;
}

std::vector<SeeSawRun> run_multistart(const SeeSawProblem& problem,
                                      const std::vector<ComplexVector>& starts,
                                      const SeeSawOptions& options) {
    std::vector<SeeSawRun> runs(starts.size());
    parallel_for(starts.size(), [&](std::size_t i) { runs[i] = run_seesaw(problem, starts[i], options); });
    return runs;
}

std::size_t best_run(const std::vector<SeeSawRun>& runs) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < runs.size(); ++i) {
        if (runs[i].value < runs[best].value) best = i;
    }
    return best;
}

}  // namespace ewlab
