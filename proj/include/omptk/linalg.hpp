#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "omptk/errors.hpp"

namespace omptk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative tolerance below which an orthogonalized column counts as already
/// spanned.
inline constexpr double kDegenerateColumnTol = 1e-12;

/// Relative pivot tolerance for rank decisions in pivoted factorizations.
inline constexpr double kRankTol = 1e-10;

/// Residual norms at or below this are treated as zero by selection_ratio.
inline constexpr double kZeroResidualNormTol = 1e-14;

/// Orthogonal projection of a fixed vector onto the orthogonal complement of
/// a growing set of columns, updated incrementally. The projector itself is
/// never materialized; an orthonormal basis of the selected span is kept via
/// modified Gram-Schmidt with one reorthogonalization pass.
///
/// Value semantics: copy freely, no internal sharing.
class ProjectionState {
 public:
  /// Starts with an empty basis; the residual is y itself.
  explicit ProjectionState(Vector y) : residual_(std::move(y)) {}

  /// Appends one column to the selected span and deflates the residual.
  /// Throws DegenerateColumn when the column is numerically in the span.
  void append(const Vector& column, int index);

  /// Squared correlation of the column with the residual, normalized by the
  /// residual energy. Throws ZeroResidual when the residual norm is at or
  /// below kZeroResidualNormTol.
  double selection_ratio(const Vector& column) const;

  const Vector& residual() const { return residual_; }
  const std::vector<int>& selected() const { return selected_; }
  const std::vector<Vector>& basis() const { return basis_; }
  Eigen::Index dimension() const { return residual_.size(); }

 private:
  std::vector<int> selected_;
  std::vector<Vector> basis_;
  Vector residual_;
};

/// Splits w into phi*v + w_perp with phi' * w_perp = 0, where
/// v solves the normal equations for phi. Throws RankDeficient when the
/// pivoted factorization detects column rank below phi.cols().
std::pair<Vector, Vector> decompose_noise(const Matrix& phi, const Vector& w);

/// Smallest and largest singular values of a tall matrix (rows >= cols).
std::pair<double, double> singular_value_extremes(const Matrix& phi);

}  // namespace omptk
