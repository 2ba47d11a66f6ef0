#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace densilab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline constexpr double kDefaultTolerance = 1e-12;
// Relative gap below which two computed eigenvalues count as one.
inline constexpr double kClusterGap = 1e-8;

// Real symmetric d x d matrix. Immutable after construction.
class SymMatrix {
 public:
  // Throws NotSymmetric when ||M - M^T||_F > tol * max(1, ||M||_F), or, for
  // integer-valued input, when M != M^T exactly. BadParameter on empty,
  // non-square or non-finite input.
  explicit SymMatrix(const Mat& entries, double tol = kDefaultTolerance);

  static SymMatrix from_rows(const std::vector<std::vector<double>>& rows,
                             double tol = kDefaultTolerance);
  static SymMatrix diagonal(std::span<const double> values);
  static SymMatrix diagonal(std::initializer_list<double> values);
  static SymMatrix scalar(int dim, double value);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Mat& entries() const noexcept { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  // True when every entry is an integer held exactly in a double.
  bool exact() const noexcept { return exact_; }

  double norm() const { return m_.norm(); }

 private:
  Mat m_;
  bool exact_ = false;
};

struct SpectralDecomposition {
  std::vector<double> distinct_eigenvalues;  // strictly ascending
  std::vector<int> multiplicities;
  Mat basis;                    // orthonormal columns grouped by eigenspace
  std::vector<Mat> projectors;  // one per distinct eigenvalue

  int dim() const { return static_cast<int>(basis.rows()); }
  // Eigenvalue attached to each basis column.
  Vec eigenvalues() const;
  Mat reconstruct() const;
  // Columns of `basis` spanning the i-th eigenspace.
  Mat eigenspace_basis(std::size_t i) const;
};

SpectralDecomposition decompose(const SymMatrix& a, double tol = kDefaultTolerance);

// Cyclic Jacobi on a symmetric matrix. Returns (eigenvalues, eigenvectors)
// unsorted; stops when the off-diagonal Frobenius norm drops below
// tol * ||a||_F.
std::pair<Vec, Mat> jacobi_eigen(const Mat& a, double tol = kDefaultTolerance);

bool is_expansive(const SymMatrix& a);
bool is_positive(const SymMatrix& a);

// A^t = C J^t C^T. Requires a positive map.
SymMatrix power(const SymMatrix& a, double t);

// C |J| C^T. Integer input whose absolutization is an integer matrix keeps
// the exact flag.
SymMatrix absolutize(const SymMatrix& a);

// C diag(values) C^T, one value per basis column of `dec`.
Mat assemble(const SpectralDecomposition& dec, const Vec& values);

// Exact-integer characteristic polynomial tests for 2x2 maps, shared with the
// lattice module. x^2 - trace x + det.
template <typename Int>
bool charpoly_expanding(const Int& trace, const Int& det) {
  const Int disc = trace * trace - 4 * det;
  if (disc < 0) return det > 1;  // |lambda|^2 = det
  const Int p_plus = 1 - trace + det;
  const Int p_minus = 1 + trace + det;
  if (p_plus == 0 || p_minus == 0) return false;
  if (p_plus < 0 && p_minus < 0) return true;  // roots straddle [-1, 1]
  if (p_plus > 0 && p_minus > 0) return det > 1 || det < -1;
  return false;
}



}  // namespace densilab
