#include "omptk/linalg.hpp"

#include <cmath>

namespace omptk {

void ProjectionState::append(const Vector& column, int index) {
  if (column.size() != residual_.size())
    throw std::invalid_argument("append: column length does not match state");
  const double original_norm = column.norm();
  Vector q = column;
  // Two passes of modified Gram-Schmidt: the second pass repairs the
  // cancellation the first one leaves behind.
  for (int pass = 0; pass < 2; ++pass)
    for (const Vector& b : basis_) q -= b.dot(q) * b;
  if (q.norm() < kDegenerateColumnTol * original_norm)
    throw DegenerateColumn("column is numerically in the selected span");
  q /= q.norm();
  residual_ -= q.dot(residual_) * q;
  basis_.push_back(std::move(q));
  selected_.push_back(index);
}

double ProjectionState::selection_ratio(const Vector& column) const {
  const double energy = residual_.squaredNorm();
  if (std::sqrt(energy) <= kZeroResidualNormTol)
    throw ZeroResidual("selection ratio undefined for zero residual");
  const double corr = column.dot(residual_);
  return corr * corr / energy;
}

std::pair<Vector, Vector> decompose_noise(const Matrix& phi, const Vector& w) {
  if (phi.rows() != w.size())
    throw std::invalid_argument("decompose_noise: dimension mismatch");
  Eigen::ColPivHouseholderQR<Matrix> qr(phi);
  qr.setThreshold(kRankTol);
  if (qr.rank() < phi.cols())
    throw RankDeficient("decompose_noise: phi is column rank deficient");
  Vector v = qr.solve(w);
  Vector w_perp = w - phi * v;
  return {std::move(v), std::move(w_perp)};
}

std::pair<double, double> singular_value_extremes(const Matrix& phi) {
  if (phi.rows() < phi.cols())
    throw std::invalid_argument("singular_value_extremes: needs rows >= cols");
  Eigen::JacobiSVD<Matrix> svd(phi);
  const auto& sigma = svd.singularValues();
  return {sigma(sigma.size() - 1), sigma(0)};
}

}  // namespace omptk
