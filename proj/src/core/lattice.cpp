#include "lattice.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numeric>

#include "error.hpp"

namespace densilab {

namespace {

using boost::multiprecision::pow;

void require_2x2(const IntMatrix& m) {
  if (m.dim() != 2) throw Error(ErrorCode::BadParameter, "expected a 2x2 integer matrix");
}

BigInt discriminant(const IntMatrix& m) {
  const BigInt t = m.trace();
  return t * t - 4 * m.det();
}

BigInt big(std::uint64_t v) { return BigInt(v); }

std::int64_t small(const BigInt& v) {
  if (v > BigInt(std::numeric_limits<std::int64_t>::max()) ||
      v < BigInt(std::numeric_limits<std::int64_t>::min()))
    throw Error(ErrorCode::BadParameter, "matrix entry exceeds 64 bits");
  return static_cast<std::int64_t>(v);
}

bool unimodular(const IntMatrix& c) {
  const BigInt d = c.det();
  return d == 1 || d == -1;
}

// Second column of C from the first, or nullopt when it is not integral.
// x c1 = y11 c1 + y21 c2  =>  c2 = (x c1 - y11 c1) / y21.
std::optional<std::array<std::int64_t, 2>> solve_other(const std::array<std::int64_t, 4>& x,
                                                       std::int64_t diag, std::int64_t off,
                                                       std::int64_t u, std::int64_t v) {
  const std::int64_t r0 = x[0] * u + x[1] * v - diag * u;
  const std::int64_t r1 = x[2] * u + x[3] * v - diag * v;
  if (r0 % off != 0 || r1 % off != 0) return std::nullopt;
  return std::array<std::int64_t, 2>{r0 / off, r1 / off};
}

// Shell of max-norm exactly r in Z^2, in a fixed order.
template <typename F>
bool for_shell(int r, F&& visit) {
  if (r == 0) return visit(0, 0);
  for (int u = -r; u <= r; ++u)
    for (int v = -r; v <= r; ++v)
      if (std::max(std::abs(u), std::abs(v)) == r && visit(u, v)) return true;
  return false;
}

}  // namespace

bool check_lattice_condition(const SymMatrix& a) { return a.exact(); }

bool is_expanding(const IntMatrix& m) {
  require_2x2(m);
  return charpoly_expanding<BigInt>(m.trace(), m.det());
}

std::string_view similarity_class_name(SimilarityClass c) {
  switch (c) {
    case SimilarityClass::A1: return "A1";
    case SimilarityClass::A2: return "A2";
    case SimilarityClass::PlusA3: return "+A3";
    case SimilarityClass::MinusA3: return "-A3";
    case SimilarityClass::PlusA4: return "+A4";
    case SimilarityClass::MinusA4: return "-A4";
  }
  return "?";
}

IntMatrix class_representative(SimilarityClass c) {
  switch (c) {
    case SimilarityClass::A1: return IntMatrix(2, {0, 2, 1, 0});
    case SimilarityClass::A2: return IntMatrix(2, {0, 2, -1, 0});
    case SimilarityClass::PlusA3: return IntMatrix(2, {1, 1, -1, 1});
    case SimilarityClass::MinusA3: return IntMatrix(2, {-1, -1, 1, -1});
    case SimilarityClass::PlusA4: return IntMatrix(2, {0, 2, -1, 1});
    case SimilarityClass::MinusA4: return IntMatrix(2, {0, -2, 1, -1});
  }
  throw Error(ErrorCode::Internal, "unknown similarity class");
}

std::optional<SimilarityClass> class_from_invariants(const BigInt& det, const BigInt& trace) {
  if (det == -2) {
    if (trace == 0) return SimilarityClass::A1;
    return std::nullopt;
  }
  if (det != 2) return std::nullopt;
  if (trace == 0) return SimilarityClass::A2;
  if (trace == 2) return SimilarityClass::PlusA3;
  if (trace == -2) return SimilarityClass::MinusA3;
  if (trace == 1) return SimilarityClass::PlusA4;
  if (trace == -1) return SimilarityClass::MinusA4;
  return std::nullopt;
}

std::optional<IntMatrix> find_intertwiner(const IntMatrix& x, const IntMatrix& y, int bound) {
  require_2x2(x);
  require_2x2(y);
  if (bound < 0) throw Error(ErrorCode::BadParameter, "search bound must be >= 0");
  auto accept = [&](const IntMatrix& c) { return unimodular(c) && x * c == c * y; };
  if (accept(IntMatrix::identity(2))) return IntMatrix::identity(2);

  const std::array<std::int64_t, 4> xs{small(x(0, 0)), small(x(0, 1)), small(x(1, 0)), small(x(1, 1))};
  const std::int64_t y11 = small(y(0, 0)), y12 = small(y(0, 1));
  const std::int64_t y21 = small(y(1, 0)), y22 = small(y(1, 1));

  std::optional<IntMatrix> found;
  auto in_bound = [&](std::int64_t v) { return v >= -bound && v <= bound; };
  for (int r = 1; r <= bound && !found; ++r) {
    if (y21 != 0) {
      for_shell(r, [&](int u, int v) {
        auto c2 = solve_other(xs, y11, y21, u, v);
        if (!c2 || !in_bound((*c2)[0]) || !in_bound((*c2)[1])) return false;
        IntMatrix c(2, {u, (*c2)[0], v, (*c2)[1]});
        if (!accept(c)) return false;
        found = c;
        return true;
      });
    } else if (y12 != 0) {
      // x c2 = y12 c1 + y22 c2
      for_shell(r, [&](int u, int v) {
        auto c1 = solve_other(xs, y22, y12, u, v);
        if (!c1 || !in_bound((*c1)[0]) || !in_bound((*c1)[1])) return false;
        IntMatrix c(2, {(*c1)[0], u, (*c1)[1], v});
        if (!accept(c)) return false;
        found = c;
        return true;
      });
    } else {
      // y diagonal: plain enumeration of the shell in Z^4.
      for (int a = -r; a <= r && !found; ++a)
        for (int b = -r; b <= r && !found; ++b)
          for (int c = -r; c <= r && !found; ++c)
            for (int d = -r; d <= r && !found; ++d) {
              if (std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)}) != r) continue;
              IntMatrix cand(2, {a, b, c, d});
              if (accept(cand)) found = cand;
            }
    }
  }
  return found;
}

LatticeClassification classify_det2(const IntMatrix& m, int bound, int l_max) {
  require_2x2(m);
  LatticeClassification out;
  out.det = m.det();
  out.trace = m.trace();
  out.expanding = is_expanding(m);
  out.search_bound = bound;
  if (!out.expanding) throw Error(ErrorCode::NotExpanding, "matrix is not expanding");
  if (out.det != 2 && out.det != -2)
    throw Error(ErrorCode::WrongDeterminant, "classification needs |det M| = 2");
  out.similarity_class = class_from_invariants(out.det, out.trace);
  if (!out.similarity_class)
    throw Error(ErrorCode::Internal, "expanding |det| = 2 matrix outside the class table");
  out.conjugator = find_intertwiner(class_representative(*out.similarity_class), m, bound);
  out.witness_not_found = !out.conjugator;
  out.root_of_identity = minimal_root_of_identity(m, l_max);
  return out;
}

std::optional<RootOfIdentity> minimal_root_of_identity(const IntMatrix& m, int l_max) {
  if (l_max < 1) throw Error(ErrorCode::BadParameter, "l_max must be >= 1");
  IntMatrix p = m;
  for (int l = 1; l <= l_max; ++l) {
    BigInt n;
    if (p.is_scalar(&n) && n > 0) return RootOfIdentity{l, n};
    p = p * m;
  }
  return std::nullopt;
}

bool verify_theoremE_row(const IntMatrix& m, int l, const BigInt& n) {
  require_2x2(m);
  if (l != 3 && l != 4 && l != 6 && l != 8 && l != 12)
    throw Error(ErrorCode::BadRow, "power table rows are l = 3, 4, 6, 8, 12");
  const BigInt det = m.det();
  const BigInt trace = m.trace();
  if (det <= 0 || discriminant(m) >= 0)
    throw Error(ErrorCode::PreconditionViolated, "needs det M > 0 and non-real eigenvalues");
  if (n < 1 || n > BigInt(std::numeric_limits<std::uint64_t>::max())) return false;
  const auto nn = static_cast<std::uint64_t>(n);
  const int k = l == 3 ? 3 : l == 4 ? 2 : l == 8 ? 4 : 6;
  const auto root = nt::exact_root(nn, k);
  if (!root) return false;
  const BigInt c = big(*root);
  switch (l) {
    case 3: return trace == -c && det == c * c;
    case 4: return trace == 0 && det == c;
    case 6: return trace == c && det == c * c;
    case 8: return trace * trace == 2 * c && det == c;
    default: return trace * trace == 3 * c && det == c;
  }
}

bool corollaryD_check(const IntMatrix& m) {
  require_2x2(m);
  if (m.det() >= 0) throw Error(ErrorCode::WrongSign, "needs det M < 0");
  if (!is_expanding(m)) throw Error(ErrorCode::NotExpanding, "matrix is not expanding");
  if (m.trace() != 0) return false;
  if (!((m * m) == IntMatrix::identity(2).scaled(-m.det())))
    throw Error(ErrorCode::Internal, "trace 0 but M^2 != -det I");
  return true;
}

std::optional<RootOfIdentity> predicted_root_of_identity(const IntMatrix& m) {
  require_2x2(m);
  if (!is_expanding(m)) throw Error(ErrorCode::NotExpanding, "matrix is not expanding");
  const BigInt det = m.det();
  const BigInt trace = m.trace();
  BigInt c;
  if (m.is_scalar(&c)) return c > 0 ? RootOfIdentity{1, c} : RootOfIdentity{2, c * c};
  if (det < 0) {
    if (trace == 0) return RootOfIdentity{2, -det};
    return std::nullopt;
  }
  // Real spectrum with det > 0 and M non-scalar: no power is scalar.
  if (discriminant(m) >= 0) return std::nullopt;
  for (int l : {3, 4, 6, 8, 12}) {
    BigInt n;
    switch (l) {
      case 3: n = pow(BigInt(-trace), 3); break;
      case 4: n = det * det; break;
      case 6: n = pow(trace, 6); break;
      case 8: n = pow(det, 4); break;
      default: n = pow(det, 6); break;
    }
    if (n >= 1 && verify_theoremE_row(m, l, n)) return RootOfIdentity{l, n};
  }
  return std::nullopt;
}

std::optional<IntMatrix> theoremC_witness(int l, std::uint64_t n) {
  if (l < 1 || n < 2) throw Error(ErrorCode::BadParameter, "theoremC_witness needs l >= 1, n >= 2");
  // |p| = |lambda|^2 = n^{2/l}, integral iff l divides 2 e for every prime exponent e.
  BigInt p_abs = 1;
  for (const auto& [prime, e] : nt::factorize(n)) {
    if ((2 * e) % l != 0) return std::nullopt;
    p_abs *= pow(BigInt(prime), static_cast<unsigned>(2 * e / l));
  }
  const BigInt target = big(n);
  // x^l mod (x^2 - s x + p) == n as a constant polynomial.
  auto satisfies = [&](const BigInt& s, const BigInt& p) {
    BigInt a = 0, b = 1;  // a x + b
    for (int k = 0; k < l; ++k) {
      BigInt na = a * s + b;
      b = -a * p;
      a = std::move(na);
    }
    return a == 0 && b == target;
  };
  // Non-real roots: s^2 < 4p.
  BigInt s = 0;
  while (s * s < 4 * p_abs) {
    if (satisfies(s, p_abs)) return IntMatrix::two_by_two(0, -p_abs, 1, s);
    s = s > 0 ? BigInt(-s) : BigInt(1 - s);
  }
  // Real roots of equal modulus and distinct: lambda = ±n^{1/l}.
  if (satisfies(0, -p_abs)) return IntMatrix::two_by_two(0, p_abs, 1, 0);
  return std::nullopt;
}

bool verify_factorization(const IntMatrix& m, const IntMatrix& a, const IntMatrix& d,
                          const IntMatrix& p) {
  const int n = m.dim();
  if (a.dim() != n || d.dim() != n || p.dim() != n)
    throw Error(ErrorCode::BadParameter, "factorization dimensions differ");
  if (!unimodular(a)) throw Error(ErrorCode::NotUnimodular, "det A must be ±1");
  std::vector<int> pi(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i != j && d(i, j) != 0) throw Error(ErrorCode::BadParameter, "D must be diagonal");
      const BigInt& e = p(i, j);
      if (e != 0 && e != 1) throw Error(ErrorCode::BadParameter, "P must be a permutation matrix");
      if (e == 1) {
        if (pi[static_cast<std::size_t>(j)] >= 0)
          throw Error(ErrorCode::BadParameter, "P must be a permutation matrix");
        pi[static_cast<std::size_t>(j)] = i;
      }
    }
  for (int j = 0; j < n; ++j)
    if (pi[static_cast<std::size_t>(j)] < 0) throw Error(ErrorCode::BadParameter, "P must be a permutation matrix");
  {
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (int v : pi)
      if (seen[static_cast<std::size_t>(v)]++) throw Error(ErrorCode::BadParameter, "P must be a permutation matrix");
  }
  if (!(m * a == a * d * p)) return false;
  for (int i = 0; i < n; ++i) {
    BigInt prod = 1;
    int k = i;
    for (int step = 0; step < n; ++step) {
      prod *= d(k, k);
      k = pi[static_cast<std::size_t>(k)];
    }
    if (abs(prod) <= 1) return false;
  }
  return true;
}

std::optional<Factorization> lemmaG_factorization(const IntMatrix& m, int bound) {
  require_2x2(m);
  const IntMatrix sq = m * m;
  int sign;
  if (sq == IntMatrix::identity(2).scaled(2)) sign = 1;
  else if (sq == IntMatrix::identity(2).scaled(-2)) sign = -1;
  else throw Error(ErrorCode::PreconditionViolated, "needs M^2 = ±2I");
  const IntMatrix s = IntMatrix::two_by_two(2, 0, 0, sign);
  const IntMatrix swap = IntMatrix::two_by_two(0, 1, 1, 0);
  auto a = find_intertwiner(m, s * swap, bound);
  if (!a) return std::nullopt;
  return Factorization{*a, s, swap};
}

namespace {

bool check_rational(const RationalExponent& w, const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs) {
  if (w.p < 1 || w.q < 1 || w.bases.size() != pairs.size()) return false;
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    const auto [a, b] = pairs[j];
    if (pow(big(w.bases[j]), static_cast<unsigned>(w.q)) != big(a)) return false;
    if (pow(big(a), static_cast<unsigned>(w.p)) != pow(big(b), static_cast<unsigned>(w.q))) return false;
  }
  return true;
}

bool check_common(const CommonBase& w, const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs) {
  if (w.n.size() != pairs.size() || w.m.size() != pairs.size() || w.q < 1 || w.m_total < 1) return false;
  int g = 0;
  for (int v : w.n) g = std::gcd(g, v);
  if (g != w.q) return false;
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    const auto [a, b] = pairs[j];
    if (w.n[j] < 1 || w.m[j] < 1) return false;
    if (pow(big(w.a), static_cast<unsigned>(w.n[j])) != big(a)) return false;
    if (pow(big(w.b), static_cast<unsigned>(w.m[j])) != big(b)) return false;
    // m_j / n_j == m / q keeps A1'^t == A2' with t = m/q log b / log a.
    if (static_cast<std::int64_t>(w.m[j]) * w.q != static_cast<std::int64_t>(w.m_total) * w.n[j]) return false;
  }
  return true;
}

std::optional<RationalExponent> branch_rational(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs) {
  std::optional<std::pair<int, int>> ratio;  // (p, q) reduced, t = p / q
  for (const auto& [a, b] : pairs) {
    auto dep = nt::multiplicative_dependence(a, b);
    if (!dep) return std::nullopt;
    const int g = std::gcd(dep->p, dep->q);
    const std::pair<int, int> r{dep->q / g, dep->p / g};
    if (ratio && *ratio != r) return std::nullopt;
    ratio = r;
  }
  if (!ratio) return std::nullopt;
  RationalExponent w{ratio->first, ratio->second, {}};
  for (const auto& [a, b] : pairs) {
    auto root = nt::exact_root(a, w.q);
    if (!root) return std::nullopt;
    w.bases.push_back(*root);
  }
  if (!check_rational(w, pairs)) return std::nullopt;
  return w;
}

std::optional<CommonBase> branch_common(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs) {
  CommonBase w{};
  for (const auto& [a, b] : pairs) {
    const auto pp = nt::perfect_power(a);
    if (w.a == 0) w.a = pp.base;
    if (pp.base != w.a) return std::nullopt;
    w.n.push_back(pp.exponent);
  }
  w.q = 0;
  for (int v : w.n) w.q = std::gcd(w.q, v);
  // |lambda_j^(2)| = B^{n_j / q} with one integer B = b^m.
  std::optional<std::uint64_t> big_b;
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    auto r = nt::exact_root(pairs[j].second, w.n[j] / w.q);
    if (!r || (big_b && *big_b != *r)) return std::nullopt;
    big_b = r;
  }
  if (!big_b || *big_b < 2) return std::nullopt;
  const auto pb = nt::perfect_power(*big_b);
  w.b = pb.base;
  w.m_total = pb.exponent;
  for (int nj : w.n) w.m.push_back(w.m_total * nj / w.q);
  w.t = static_cast<double>(w.m_total) / w.q * std::log(static_cast<double>(w.b)) /
        std::log(static_cast<double>(w.a));
  if (!check_common(w, pairs)) return std::nullopt;
  return w;
}

double witness_exponent(const TrivialEquivalenceWitness& w) {
  if (const auto* r = std::get_if<RationalExponent>(&w.kind)) return static_cast<double>(r->p) / r->q;
  return std::get<CommonBase>(w.kind).t;
}

}  // namespace

bool verify_witness(const TrivialEquivalenceWitness& w) {
  if (const auto* r = std::get_if<RationalExponent>(&w.kind)) return check_rational(*r, w.pairs);
  return check_common(std::get<CommonBase>(w.kind), w.pairs);
}

std::optional<TrivialEquivalenceWitness> trivially_equivalent(const SymMatrix& a1, const SymMatrix& a2,
                                                              double t) {
  if (!check_lattice_condition(a1) || !check_lattice_condition(a2))
    throw Error(ErrorCode::PreconditionViolated, "both maps must satisfy the lattice condition");
  if (!(t > 0.0)) throw Error(ErrorCode::PreconditionViolated, "exponent must be positive");
  const auto verdict = decide_equivalence(a1, a2);
  if (!verdict.equivalent)
    throw Error(ErrorCode::PreconditionViolated, "maps are not equivalent");
  if (std::abs(*verdict.exponent - t) > 1e-9 * std::max(1.0, t))
    throw Error(ErrorCode::PreconditionViolated, "exponent does not match the equivalence verdict");
  auto pairs = integer_eigen_pairs(a1, a2, verdict.eigen_pairs);
  if (!pairs) throw Error(ErrorCode::PreconditionViolated, "eigenvalue moduli are not all integers");

  std::optional<TrivialEquivalenceWitness> out;
  if (auto r = branch_rational(*pairs)) out = TrivialEquivalenceWitness{*r, *pairs};
  else if (auto c = branch_common(*pairs)) out = TrivialEquivalenceWitness{*c, *pairs};
  if (out && std::abs(witness_exponent(*out) - t) > 1e-9 * std::max(1.0, t))
    throw Error(ErrorCode::Internal, "witness exponent disagrees with the verdict");
  return out;
}

std::string_view mra_status_name(MraStatus s) {
  switch (s) {
    case MraStatus::NotEquivalent: return "NotEquivalent";
    case MraStatus::EquivalentTrivially: return "EquivalentTrivially";
    case MraStatus::EquivalentNumericOnly: return "EquivalentNumericOnly";
  }
  return "?";
}

MraReport mra_equivalence_report(const SymMatrix& a1, const SymMatrix& a2) {
  MraReport report;
  report.lattice_ok = check_lattice_condition(a1) && check_lattice_condition(a2);
  try {
    report.verdict = decide_equivalence(a1, a2);
  } catch (const Error& e) {
    report.note = std::string(error_code_name(e.code())) + ": " + e.what();
    return report;
  }
  if (!report.verdict->equivalent) {
    report.note = report.verdict->obstruction
                      ? std::string(obstruction_name(report.verdict->obstruction->kind))
                      : std::string("not equivalent");
    return report;
  }
  if (report.lattice_ok) {
    try {
      report.witness = trivially_equivalent(a1, a2, *report.verdict->exponent);
    } catch (const Error& e) {
      report.note = std::string(error_code_name(e.code())) + ": " + e.what() + "; ";
    }
  }
  if (report.witness) {
    report.status = MraStatus::EquivalentTrivially;
    return report;
  }
  report.status = MraStatus::EquivalentNumericOnly;
  if (report.lattice_ok)
    report.note += "conditional on the Four Exponentials Conjecture this should not occur for integer-lattice pairs";
  else
    report.note += "no trivial-equivalence witness: a map violates the lattice condition";
  return report;
}

DyadicResult dyadic_class(const SymMatrix& a, double tol) {
  if (!is_expansive(a)) throw Error(ErrorCode::NotExpansive, "dyadic_class requires an expansive map");
  DyadicResult out;
  if (a.exact()) {
    // A' is the positive square root of A^2, so A' is scalar iff A^2 is.
    const IntMatrix m = IntMatrix::from_sym(a);
    BigInt c2;
    out.certification = Certification::ExactInteger;
    if (!(m * m).is_scalar(&c2)) return out;
    out.dyadic = true;
    out.scale = std::sqrt(static_cast<double>(c2));
  } else {
    const auto dec = decompose(absolutize(a), tol);
    if (dec.distinct_eigenvalues.size() != 1) return out;
    out.dyadic = true;
    out.scale = dec.distinct_eigenvalues.front();
  }
  out.exponent = std::log(*out.scale) / std::log(2.0);
  return out;
}

}  // namespace densilab
