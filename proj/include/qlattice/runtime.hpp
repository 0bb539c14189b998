#pragma once

// Process-wide execution knobs and deterministic randomness helpers.
// Parallelism is slot-based: each task writes only its own output cell, so
// results are bitwise identical for any thread count.

#include <cstdint>
#include <functional>
#include <random>

#include "qlattice/tensorops.hpp"

namespace qlat {

// Worker count: explicit set_thread_count wins, then QLATTICE_THREADS, else 1.
int thread_count();
void set_thread_count(int threads);

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

inline std::mt19937_64 seeded_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

Cplx random_complex_gaussian(std::mt19937_64& rng);
Vec random_complex_vector(Index size, std::mt19937_64& rng);
// Haar-ish unitary from QR of a Ginibre matrix with phase-fixed diagonal.
Mat random_unitary(int n, std::mt19937_64& rng);

}  // namespace qlat
