#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace densilab {

namespace {

constexpr double kMaxExactInteger = 9007199254740992.0;  // 2^53

bool integer_valued(const Mat& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double v = m.data()[i];
    if (!(std::abs(v) <= kMaxExactInteger) || std::trunc(v) != v) return false;
  }
  return true;
}

// Eigenpairs sorted ascending and grouped into clusters of relative width
// kClusterGap.
SpectralDecomposition group(const Vec& values, const Mat& vectors) {
  const int d = static_cast<int>(values.size());
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return values(x) < values(y); });

  double scale = 0.0;
  for (int i = 0; i < d; ++i) scale = std::max(scale, std::abs(values(i)));
  const double gap = kClusterGap * std::max(scale, std::numeric_limits<double>::min());

  SpectralDecomposition dec;
  dec.basis.resize(d, d);
  std::vector<double> sums;
  for (int k = 0; k < d; ++k) {
    const int src = order[k];
    dec.basis.col(k) = vectors.col(src);
    if (k > 0 && values(src) - values(order[k - 1]) <= gap) {
      sums.back() += values(src);
      ++dec.multiplicities.back();
    } else {
      sums.push_back(values(src));
      dec.multiplicities.push_back(1);
    }
  }
  int offset = 0;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    const int m = dec.multiplicities[i];
    dec.distinct_eigenvalues.push_back(sums[i] / m);
    const Mat cols = dec.basis.middleCols(offset, m);
    dec.projectors.push_back(cols * cols.transpose());
    offset += m;
  }
  return dec;
}

// Closed-form path for integer 2x2 input; distinctness is decided exactly.
SpectralDecomposition decompose_exact2(const SymMatrix& a) {
  const auto p = static_cast<std::int64_t>(a(0, 0));
  const auto q = static_cast<std::int64_t>(a(0, 1));
  const auto r = static_cast<std::int64_t>(a(1, 1));
  using boost::multiprecision::cpp_int;
  const cpp_int disc = cpp_int(p - r) * (p - r) + 4 * cpp_int(q) * q;

  SpectralDecomposition dec;
  if (disc == 0) {
    dec.distinct_eigenvalues = {static_cast<double>(p)};
    dec.multiplicities = {2};
    dec.basis = Mat::Identity(2, 2);
    dec.projectors = {Mat::Identity(2, 2)};
    return dec;
  }
  const double root = std::sqrt(disc.convert_to<double>());
  const double mean = 0.5 * (static_cast<double>(p) + static_cast<double>(r));
  const double lo = mean - 0.5 * root;
  const double hi = mean + 0.5 * root;
  Vec v_lo(2);
  if (q == 0) {
    v_lo = (p < r) ? Vec::Unit(2, 0) : Vec::Unit(2, 1);
  } else {
    // (A - lo I) v = 0: pick the better conditioned of the two row forms.
    Vec c1(2), c2(2);
    c1 << static_cast<double>(q), lo - static_cast<double>(p);
    c2 << lo - static_cast<double>(r), static_cast<double>(q);
    v_lo = (c1.norm() >= c2.norm() ? c1 : c2).normalized();
  }
  Vec v_hi(2);
  v_hi << -v_lo(1), v_lo(0);
  dec.distinct_eigenvalues = {lo, hi};
  dec.multiplicities = {1, 1};
  dec.basis.resize(2, 2);
  dec.basis.col(0) = v_lo;
  dec.basis.col(1) = v_hi;
  dec.projectors = {v_lo * v_lo.transpose(), v_hi * v_hi.transpose()};
  return dec;
}

std::int64_t exact_entry(const SymMatrix& a, int i, int j) {
  return static_cast<std::int64_t>(a(i, j));
}

}  // namespace

SymMatrix::SymMatrix(const Mat& entries, double tol) {
  if (entries.rows() == 0 || entries.rows() != entries.cols())
    throw Error(ErrorCode::BadParameter, "matrix must be square with dim >= 1");
  if (!entries.allFinite())
    throw Error(ErrorCode::BadParameter, "matrix entries must be finite");
  exact_ = integer_valued(entries);
  if (exact_) {
    if (entries != entries.transpose())
      throw Error(ErrorCode::NotSymmetric, "integer matrix is not exactly symmetric");
    m_ = entries;
    return;
  }
  const double residual = (entries - entries.transpose()).norm();
  if (residual > tol * std::max(1.0, entries.norm()))
    throw Error(ErrorCode::NotSymmetric,
                "symmetry residual " + std::to_string(residual) + " exceeds tolerance");
  m_ = 0.5 * (entries + entries.transpose());
}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows, double tol) {
  const auto d = static_cast<Eigen::Index>(rows.size());
  Mat m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != d)
      throw Error(ErrorCode::BadParameter, "matrix rows must all have length dim");
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rows[i][j];
  }
  return SymMatrix(m, tol);
}

SymMatrix SymMatrix::diagonal(std::span<const double> values) {
  const auto d = static_cast<Eigen::Index>(values.size());
  Mat m = Mat::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) m(i, i) = values[i];
  return SymMatrix(m);
}

SymMatrix SymMatrix::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

SymMatrix SymMatrix::scalar(int dim, double value) {
  return SymMatrix(value * Mat::Identity(dim, dim));
}

Vec SpectralDecomposition::eigenvalues() const {
  Vec out(dim());
  int k = 0;
  for (std::size_t i = 0; i < distinct_eigenvalues.size(); ++i)
    for (int r = 0; r < multiplicities[i]; ++r) out(k++) = distinct_eigenvalues[i];
  return out;
}

Mat SpectralDecomposition::reconstruct() const { return assemble(*this, eigenvalues()); }

Mat SpectralDecomposition::eigenspace_basis(std::size_t i) const {
  const int offset = std::accumulate(multiplicities.begin(),
                                     multiplicities.begin() + static_cast<long>(i), 0);
  return basis.middleCols(offset, multiplicities.at(i));
}

Mat assemble(const SpectralDecomposition& dec, const Vec& values) {
  return dec.basis * values.asDiagonal() * dec.basis.transpose();
}

std::pair<Vec, Mat> jacobi_eigen(const Mat& input, double tol) {
  const Eigen::Index n = input.rows();
  Mat a = input;
  Mat v = Mat::Identity(n, n);
  const double target = tol * a.norm();

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > target; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Symmetric Schur 2x2: zero a(p,q) with a rotation (c, s).
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  return {a.diagonal(), v};
}

SpectralDecomposition decompose(const SymMatrix& a, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::BadParameter, "tolerance must be positive");
  if (a.exact() && a.dim() == 2) return decompose_exact2(a);
  auto [values, vectors] = jacobi_eigen(a.entries(), tol);
  return group(values, vectors);
}

bool is_expansive(const SymMatrix& a) {
  if (a.exact() && a.dim() == 1) return std::abs(a(0, 0)) > 1.0;
  if (a.exact() && a.dim() == 2) {
    using boost::multiprecision::cpp_int;
    const cpp_int trace = cpp_int(exact_entry(a, 0, 0)) + exact_entry(a, 1, 1);
    const cpp_int det = cpp_int(exact_entry(a, 0, 0)) * exact_entry(a, 1, 1) -
                        cpp_int(exact_entry(a, 0, 1)) * exact_entry(a, 1, 0);
    return charpoly_expanding(trace, det);
  }
  const auto dec = decompose(a);
  return std::all_of(dec.distinct_eigenvalues.begin(), dec.distinct_eigenvalues.end(),
                     [](double b) { return std::abs(b) > 1.0; });
}

bool is_positive(const SymMatrix& a) {
  if (a.exact() && a.dim() == 1) return a(0, 0) > 0.0;
  if (a.exact() && a.dim() == 2) {
    using boost::multiprecision::cpp_int;
    const cpp_int trace = cpp_int(exact_entry(a, 0, 0)) + exact_entry(a, 1, 1);
    const cpp_int det = cpp_int(exact_entry(a, 0, 0)) * exact_entry(a, 1, 1) -
                        cpp_int(exact_entry(a, 0, 1)) * exact_entry(a, 1, 0);
    return det > 0 && trace > 0;
  }
  return decompose(a).distinct_eigenvalues.front() > 0.0;
}

SymMatrix power(const SymMatrix& a, double t) {
  if (!std::isfinite(t)) throw Error(ErrorCode::BadParameter, "exponent must be finite");
  if (!is_positive(a)) throw Error(ErrorCode::NotPositive, "power requires a positive map");
  if (t == 1.0) return a;
  const auto dec = decompose(a);
  Vec values = dec.eigenvalues();
  for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = std::pow(values(i), t);
  return SymMatrix(assemble(dec, values));
}

SymMatrix absolutize(const SymMatrix& a) {
  if (!is_expansive(a)) throw Error(ErrorCode::NotExpansive, "absolutize requires an expansive map");
  if (is_positive(a)) return a;
  const auto dec = decompose(a);
  const Mat numeric = assemble(dec, dec.eigenvalues().cwiseAbs());
  if (a.exact()) {
    // A' is the unique positive square root of A^2, so an integer candidate R
    // with R^2 == A^2 exactly and R positive is A' itself.
    using boost::multiprecision::cpp_int;
    const int d = a.dim();
    Mat rounded = numeric.array().round().matrix();
    if ((rounded - numeric).cwiseAbs().maxCoeff() <= 1e-6 && integer_valued(rounded)) {
      bool equal = true;
      for (int i = 0; i < d && equal; ++i) {
        for (int j = 0; j < d && equal; ++j) {
          cpp_int lhs = 0, rhs = 0;
          for (int k = 0; k < d; ++k) {
            lhs += cpp_int(static_cast<std::int64_t>(rounded(i, k))) *
                   static_cast<std::int64_t>(rounded(k, j));
            rhs += cpp_int(exact_entry(a, i, k)) * exact_entry(a, k, j);
          }
          equal = lhs == rhs;
        }
      }
      if (equal && rounded == rounded.transpose()) {
        SymMatrix candidate(rounded);
        if (is_positive(candidate)) return candidate;
      }
    }
  }
  return SymMatrix(numeric);
}

}  // namespace densilab
