#include "equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"
#include "exact.hpp"
#include "numbertheory.hpp"

namespace densilab {

namespace {

enum class Comparison { Equal, NotEqual, Unknown };

BigInt big_pow(std::uint64_t base, int exp) {
  return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exp));
}

// Exact comparison of log(b_i)/log(a_i) against log(b_r)/log(a_r) for
// integers >= 2. Unknown exactly when neither a_i ~ a_r nor either pair is
// multiplicatively dependent, which is where only transcendence results
// would decide.
Comparison compare_log_ratios(std::uint64_t a_i, std::uint64_t b_i, std::uint64_t a_r,
                              std::uint64_t b_r) {
  if (a_i == a_r && b_i == b_r) return Comparison::Equal;
  if (auto dep = nt::multiplicative_dependence(a_i, a_r)) {
    // a_i = c^x, a_r = c^y: equal iff y log b_i == x log b_r.
    return big_pow(b_i, dep->q) == big_pow(b_r, dep->p) ? Comparison::Equal : Comparison::NotEqual;
  }
  const auto di = nt::multiplicative_dependence(a_i, b_i);
  const auto dr = nt::multiplicative_dependence(a_r, b_r);
  if (di && dr) {
    // Rational exponents q/p on both sides.
    return static_cast<std::int64_t>(di->q) * dr->p == static_cast<std::int64_t>(dr->q) * di->p
               ? Comparison::Equal
               : Comparison::NotEqual;
  }
  if (di || dr) return Comparison::NotEqual;  // rational against irrational
  return Comparison::Unknown;
}

std::optional<std::vector<std::uint64_t>> absolute_integer_values(const SymMatrix& a) {
  auto spectrum = exact_integer_spectrum(a);
  if (!spectrum) return std::nullopt;
  std::vector<std::uint64_t> out;
  for (const auto& ev : *spectrum) out.push_back(static_cast<std::uint64_t>(std::llabs(ev.value)));
  return out;
}

std::optional<std::uint64_t> match_integer(double value, const std::vector<std::uint64_t>& allowed) {
  const double r = std::round(value);
  if (std::abs(value - r) > 1e-6 * std::max(1.0, r)) return std::nullopt;
  const auto v = static_cast<std::uint64_t>(r);
  if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) return std::nullopt;
  return v;
}

// Exact commutator test when both maps are integer matrices.
std::optional<bool> exact_commute(const SymMatrix& a1, const SymMatrix& a2) {
  if (!a1.exact() || !a2.exact()) return std::nullopt;
  const IntMatrix m1 = IntMatrix::from_sym(a1);
  const IntMatrix m2 = IntMatrix::from_sym(a2);
  return m1 * m2 == m2 * m1;
}

}  // namespace

std::string_view certification_name(Certification c) {
  return c == Certification::ExactInteger ? "ExactInteger" : "Numeric";
}

std::string_view obstruction_name(ObstructionKind k) {
  return k == ObstructionKind::NotSimultaneouslyDiagonalizable ? "NotSimultaneouslyDiagonalizable"
                                                               : "ExponentMismatch";
}

std::optional<Mat> simultaneous_diagonalization(const SymMatrix& a1, const SymMatrix& a2, double tol) {
  if (a1.dim() != a2.dim()) throw Error(ErrorCode::BadParameter, "maps have different dimensions");
  if (auto exact = exact_commute(a1, a2)) {
    if (!*exact) return std::nullopt;
  } else {
    const Mat comm = a1.entries() * a2.entries() - a2.entries() * a1.entries();
    if (comm.norm() > tol * a1.norm() * a2.norm()) return std::nullopt;
  }

  const auto dec = decompose(a1, tol);
  const int d = a1.dim();
  Mat basis(d, d);
  int offset = 0;
  for (std::size_t i = 0; i < dec.distinct_eigenvalues.size(); ++i) {
    const Mat q = dec.eigenspace_basis(i);
    const int m = dec.multiplicities[i];
    if (m == 1) {
      basis.col(offset) = q.col(0);
    } else {
      Mat restricted = q.transpose() * a2.entries() * q;
      restricted = 0.5 * (restricted + restricted.transpose());
      auto [values, vectors] = jacobi_eigen(restricted, tol);
      std::vector<int> order(m);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int x, int y) { return values(x) < values(y); });
      for (int k = 0; k < m; ++k) basis.col(offset + k) = q * vectors.col(order[k]);
    }
    offset += m;
  }
  return basis;
}

std::optional<std::vector<std::pair<std::uint64_t, std::uint64_t>>> integer_eigen_pairs(
    const SymMatrix& a1, const SymMatrix& a2, const std::vector<std::pair<double, double>>& pairs) {
  const auto abs1 = absolute_integer_values(a1);
  if (!abs1) return std::nullopt;
  const auto abs2 = absolute_integer_values(a2);
  if (!abs2) return std::nullopt;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (const auto& [mu1, mu2] : pairs) {
    auto x = match_integer(mu1, *abs1);
    auto y = match_integer(mu2, *abs2);
    if (!x || !y) return std::nullopt;
    out.emplace_back(*x, *y);
  }
  return out;
}

EquivalenceVerdict decide_equivalence(const SymMatrix& a1, const SymMatrix& a2,
                                      const EquivalenceOptions& opts) {
  if (a1.dim() != a2.dim()) throw Error(ErrorCode::BadParameter, "maps have different dimensions");
  if (!is_expansive(a1) || !is_expansive(a2))
    throw Error(ErrorCode::NotExpansive, "equivalence is decided for expansive maps only");
  if (!(opts.exponent_tol > 0.0)) throw Error(ErrorCode::BadParameter, "exponent tolerance must be positive");

  const SymMatrix p1 = absolutize(a1);
  const SymMatrix p2 = absolutize(a2);

  EquivalenceVerdict verdict;
  const auto basis = simultaneous_diagonalization(p1, p2, opts.tol);
  if (!basis) {
    verdict.obstruction = Obstruction{ObstructionKind::NotSimultaneouslyDiagonalizable, std::nullopt};
    verdict.certification = exact_commute(p1, p2) ? Certification::ExactInteger : Certification::Numeric;
    return verdict;
  }
  verdict.common_basis = *basis;

  const int d = a1.dim();
  std::vector<double> t(static_cast<std::size_t>(d));
  double log_sum1 = 0.0, log_sum2 = 0.0;
  for (int k = 0; k < d; ++k) {
    const Vec u = basis->col(k);
    const double mu1 = u.dot(p1.entries() * u);
    const double mu2 = u.dot(p2.entries() * u);
    verdict.eigen_pairs.emplace_back(mu1, mu2);
    t[static_cast<std::size_t>(k)] = std::log(mu2) / std::log(mu1);
    log_sum1 += std::log(mu1);
    log_sum2 += std::log(mu2);
  }

  const auto ints = integer_eigen_pairs(a1, a2, verdict.eigen_pairs);

  bool all_exact = ints.has_value();
  std::optional<ExponentMismatch> mismatch;
  for (int l = 1; l < d && !mismatch; ++l) {
    Comparison cmp = Comparison::Unknown;
    if (ints) {
      const auto [a_l, b_l] = (*ints)[static_cast<std::size_t>(l)];
      const auto [a_0, b_0] = (*ints)[0];
      cmp = compare_log_ratios(a_l, b_l, a_0, b_0);
    }
    if (cmp == Comparison::Unknown) {
      all_exact = false;
      const double t0 = t[0];
      const double tl = t[static_cast<std::size_t>(l)];
      cmp = std::abs(tl - t0) <= opts.exponent_tol * std::max(1.0, std::abs(t0)) ? Comparison::Equal
                                                                                 : Comparison::NotEqual;
    } else if (cmp == Comparison::NotEqual) {
      all_exact = true;  // a single certified inequality settles the verdict
    }
    if (cmp == Comparison::NotEqual) mismatch = ExponentMismatch{0, l, t[0], t[static_cast<std::size_t>(l)]};
  }

  verdict.certification = all_exact ? Certification::ExactInteger : Certification::Numeric;
  if (mismatch) {
    verdict.obstruction = Obstruction{ObstructionKind::ExponentMismatch, mismatch};
    return verdict;
  }
  verdict.equivalent = true;
  verdict.exponent = log_sum2 / log_sum1;
  return verdict;
}

Region conjugate_decision_transport(const Mat& c, const SymMatrix& a, const Region& e) {
  if (c.rows() != c.cols() || c.rows() != a.dim() || e.dim() != a.dim())
    throw Error(ErrorCode::BadParameter, "conjugator, map and region dimensions differ");
  Eigen::FullPivLU<Mat> lu(c);
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularMatrix, "conjugator is singular");
  return Region::preimage(e, c);
}

}  // namespace densilab
