#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>

// Small dense linear-system solver and a one-dimensional maximizer. These are
// the only numerical kernels the Markov solvers and the SKR optimizer need;
// the largest system in scope has dimension around two thousand.

namespace qrchain {

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DenseSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
};

/// LU factorization with partial (row) pivoting. A pivot is rejected when its
/// magnitude falls below 1e-14 relative to the largest entry of the input
/// matrix. One factorization serves solves with both A and its transpose.
class PivotedLu {
 public:
  explicit PivotedLu(Eigen::MatrixXd a);

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::VectorXd solve_transposed(const Eigen::VectorXd& b) const;

  Eigen::Index dimension() const { return lu_.rows(); }

 private:
  Eigen::MatrixXd lu_;             // unit-lower L below diagonal, U on and above
  std::vector<Eigen::Index> perm_; // row permutation, applied as b[perm_[i]]
};

/// Solves A x = b by partial-pivoting Gaussian elimination followed by one
/// pass of iterative refinement. Throws SingularMatrixError when no acceptable
/// pivot exists.
Eigen::VectorXd solve_dense(const DenseSystem& system);

/// Factored solve with one refinement pass against the original matrix.
Eigen::VectorXd solve_refined(const PivotedLu& lu, const Eigen::MatrixXd& a,
                              const Eigen::VectorXd& b, bool transposed = false);

struct GoldenMaxResult {
  double argmax = 0.0;
  double max = 0.0;
  int evaluations = 0;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
/// The bracket shrinks by the inverse golden ratio each iteration until its
/// width drops below tol; f is never evaluated outside [lo, hi].
GoldenMaxResult golden_section_max(const std::function<double(double)>& f, double lo,
                                   double hi, double tol);

}  // namespace qrchain
