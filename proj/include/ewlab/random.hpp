#ifndef EWLAB_RANDOM_HPP
#define EWLAB_RANDOM_HPP

#include "ewlab/linalg.hpp"

#include <cstdint>
#include <random>

namespace ewlab {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Child seed for stream `index` of `seed`. Every randomized routine derives its
/// generators through this chain, so results do not depend on execution order.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t index) {
    return Rng(derive_seed(seed, index));
}

/// Complex standard-normal vector, normalized to unit length.
ComplexVector random_unit_vector(int dim, Rng& rng);
ComplexMatrix random_gaussian_matrix(int rows, int cols, Rng& rng);
/// Haar-distributed unitary via QR with phase fix.
ComplexMatrix random_unitary(int dim, Rng& rng);
/// Hermitian matrix with standard-normal entries (GUE-like, unnormalized).
ComplexMatrix random_hermitian(int dim, Rng& rng);
/// Vector (e^{i t_1}, ..., e^{i t_n}) with uniform phases.
ComplexVector random_phase_vector(int dim, Rng& rng);

}  // namespace ewlab

#endif  // EWLAB_RANDOM_HPP
