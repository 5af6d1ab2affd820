#pragma once

#include "omptk/linalg.hpp"
#include "omptk/rng.hpp"

namespace omptk::testing {

inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng,
                              double scale = 1.0) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = scale * rng.normal();
  return m;
}

inline Vector gaussian_vector(Eigen::Index size, Rng& rng, double scale = 1.0) {
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = scale * rng.normal();
  return v;
}

}  // namespace omptk::testing
