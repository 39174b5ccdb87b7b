#pragma once

#include <random>

#include "freelab/types.hpp"

namespace freelab {

// Seeded matrix/vector generators; every randomized test and experiment in
// the project draws through these so runs are reproducible bit for bit.

inline MatC random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  MatC m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

inline MatC random_hermitian(std::mt19937_64& rng, int n) {
  MatC m = random_matrix(rng, n, n);
  return hermitize(m);
}

inline VecC random_unit_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  VecC v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  v /= v.norm();
  return v;
}

}  // namespace freelab
