#ifndef EWLAB_SEESAW_HPP
#define EWLAB_SEESAW_HPP

#include "ewlab/linalg.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace ewlab {

/// Alternating minimization of a bilinear Hermitian form f(x, y) over unit vectors.
/// `given_x(x)` returns the Hermitian matrix M with f(x, y) = <y|M|y>; `given_y(y)` the
/// matrix N with f(x, y) = <x|N|x>.
struct SeeSawProblem {
    int x_dim = 0;
    int y_dim = 0;
    std::function<ComplexMatrix(const ComplexVector&)> given_x;
    std::function<ComplexMatrix(const ComplexVector&)> given_y;
};

struct SeeSawOptions {
    int max_iterations = 500;
    double objective_tol = 1e-12;
    // Polishing keeps iterating after objective convergence until the vectors themselves
    // stop moving. Objective changes saturate at ~1e-16 while the vectors are still
    // ~1e-8 away from an exact zero.
    bool polish = false;
    double polish_tol = 1e-14;
    int polish_max_iterations = 3000;
    bool record_history = false;
};

struct SeeSawRun {
    double value = 0.0;
    ComplexVector x;
    ComplexVector y;
    int iterations = 0;
    bool converged = false;
    bool polished = false;               // vector change fell below polish_tol
    std::vector<double> history;         // objective after every half-step, if recorded
};

SeeSawRun run_seesaw(const SeeSawProblem& problem, const ComplexVector& x0,
                     const SeeSawOptions& options = {});

/// Structured and random starting vectors for x:
/// computational basis, the all-phases family (theta = 0 plus `x_dim` random phase draws),
/// then `random_count` complex-normal vectors. Restart r draws from derive_seed(seed, r).
std::vector<ComplexVector> seesaw_starts(int x_dim, int random_count, std::uint64_t seed);

/// Runs every start (in parallel when allowed); output order matches `starts`.
std::vector<SeeSawRun> run_multistart(const SeeSawProblem& problem,
                                      const std::vector<ComplexVector>& starts,
                                      const SeeSawOptions& options = {});

/// Index of the run with the smallest value; ties go to the lowest index.
std::size_t best_run(const std::vector<SeeSawRun>& runs);

}  // namespace ewlab

#endif  // EWLAB_SEESAW_HPP
