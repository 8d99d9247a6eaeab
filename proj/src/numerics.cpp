#include "qrchain/numerics.hpp"

#include <cmath>

namespace qrchain {

PivotedLu::PivotedLu(Eigen::MatrixXd a) : lu_(std::move(a)) {
  const Eigen::Index n = lu_.rows();
  if (n != lu_.cols()) throw std::invalid_argument("PivotedLu: matrix must be square");
  perm_.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) perm_[static_cast<std::size_t>(i)] = i;

  const double scale = lu_.cwiseAbs().maxCoeff();
  if (scale == 0.0) throw SingularMatrixError("PivotedLu: zero matrix");
  const double pivot_floor = 1e-14 * scale;

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot_row = k;
    double pivot_mag = std::abs(lu_(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double mag = std::abs(lu_(i, k));
      if (mag > pivot_mag) {
        pivot_mag = mag;
        pivot_row = i;
      }
    }
    if (!(pivot_mag > pivot_floor))
      throw SingularMatrixError("PivotedLu: no pivot above relative threshold");
    if (pivot_row != k) {
      lu_.row(k).swap(lu_.row(pivot_row));
      std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(pivot_row)]);
    }
    const Eigen::Index m = n - k - 1;
    if (m > 0) {
      lu_.col(k).tail(m) /= lu_(k, k);
      lu_.bottomRightCorner(m, m).noalias() -= lu_.col(k).tail(m) * lu_.row(k).tail(m);
    }
  }
}

Eigen::VectorXd PivotedLu::solve(const Eigen::VectorXd& b) const {
  const Eigen::Index n = lu_.rows();
  if (b.size() != n) throw std::invalid_argument("PivotedLu::solve: size mismatch");
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = b(perm_[static_cast<std::size_t>(i)]);
  // forward substitution with unit-lower L
  for (Eigen::Index i = 1; i < n; ++i) x(i) -= lu_.row(i).head(i).dot(x.head(i));
  // back substitution with U
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    if (i + 1 < n) x(i) -= lu_.row(i).tail(n - i - 1).dot(x.tail(n - i - 1));
    x(i) /= lu_(i, i);
  }
  return x;
}

Eigen::VectorXd PivotedLu::solve_transposed(const Eigen::VectorXd& b) const {
  // A^T x = b with P A = L U means x = P^T L^-T U^-T b.
  const Eigen::Index n = lu_.rows();
  if (b.size() != n) throw std::invalid_argument("PivotedLu::solve_transposed: size mismatch");
  Eigen::VectorXd y = b;
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i) /= lu_(i, i);
    if (i + 1 < n) y.tail(n - i - 1) -= y(i) * lu_.row(i).tail(n - i - 1).transpose();
  }
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    if (i + 1 < n) y(i) -= lu_.col(i).tail(n - i - 1).dot(y.tail(n - i - 1));
  }
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(perm_[static_cast<std::size_t>(i)]) = y(i);
  return x;
}

Eigen::VectorXd solve_refined(const PivotedLu& lu, const Eigen::MatrixXd& a,
                              const Eigen::VectorXd& b, bool transposed) {
  Eigen::VectorXd x = transposed ? lu.solve_transposed(b) : lu.solve(b);
  Eigen::VectorXd residual =
      transposed ? Eigen::VectorXd(b - a.transpose() * x) : Eigen::VectorXd(b - a * x);
  x += transposed ? lu.solve_transposed(residual) : lu.solve(residual);
  return x;
}

Eigen::VectorXd solve_dense(const DenseSystem& system) {
  if (system.matrix.rows() != system.matrix.cols())
    throw std::invalid_argument("solve_dense: matrix must be square");
  if (system.rhs.size() != system.matrix.rows())
    throw std::invalid_argument("solve_dense: rhs length must match matrix dimension");
  PivotedLu lu(system.matrix);
  return solve_refined(lu, system.matrix, system.rhs);
}

GoldenMaxResult golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                   double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("golden_section_max: tol must be > 0");
  if (!(lo < hi)) throw std::invalid_argument("golden_section_max: need lo < hi");

  constexpr double kInvPhi = 0.6180339887498949;  // 1/phi
  GoldenMaxResult result;

  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  result.evaluations = 2;

  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
    ++result.evaluations;
  }
  if (f1 >= f2) {
    result.argmax = x1;
    result.max = f1;
  } else {
    result.argmax = x2;
    result.max = f2;
  }
  return result;
}

}  // namespace qrchain
