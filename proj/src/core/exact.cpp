#include "exact.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "error.hpp"

namespace densilab {

IntMatrix::IntMatrix(int dim, std::initializer_list<std::int64_t> row_major) : IntMatrix(dim) {
  if (row_major.size() != e_.size())
    throw Error(ErrorCode::BadParameter, "IntMatrix initializer has wrong size");
  std::size_t k = 0;
  for (auto v : row_major) e_[k++] = v;
}

IntMatrix IntMatrix::identity(int dim) {
  IntMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::two_by_two(BigInt a, BigInt b, BigInt c, BigInt d) {
  IntMatrix m(2);
  m(0, 0) = std::move(a);
  m(0, 1) = std::move(b);
  m(1, 0) = std::move(c);
  m(1, 1) = std::move(d);
  return m;
}

IntMatrix IntMatrix::from_sym(const SymMatrix& a) {
  if (!a.exact())
    throw Error(ErrorCode::PreconditionViolated, "matrix entries are not exact integers");
  IntMatrix m(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) m(i, j) = static_cast<std::int64_t>(a(i, j));
  return m;
}

BigInt IntMatrix::trace() const {
  BigInt t = 0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

BigInt IntMatrix::det() const {
  if (dim_ == 0) return 1;
  IntMatrix m = *this;
  BigInt sign = 1;
  BigInt prev = 1;
  for (int k = 0; k < dim_ - 1; ++k) {
    if (m(k, k) == 0) {
      int swap = -1;
      for (int r = k + 1; r < dim_; ++r)
        if (m(r, k) != 0) {
          swap = r;
          break;
        }
      if (swap < 0) return 0;
      for (int c = 0; c < dim_; ++c) std::swap(m(k, c), m(swap, c));
      sign = -sign;
    }
    for (int i = k + 1; i < dim_; ++i)
      for (int j = k + 1; j < dim_; ++j)
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(dim_ - 1, dim_ - 1);
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (o.dim_ != dim_) throw Error(ErrorCode::BadParameter, "dimension mismatch");
  IntMatrix r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int k = 0; k < dim_; ++k) {
      if ((*this)(i, k) == 0) continue;
      for (int j = 0; j < dim_; ++j) r(i, j) += (*this)(i, k) * o(k, j);
    }
  return r;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
  if (o.dim_ != dim_) throw Error(ErrorCode::BadParameter, "dimension mismatch");
  IntMatrix r = *this;
  for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] -= o.e_[k];
  return r;
}

IntMatrix IntMatrix::scaled(const BigInt& s) const {
  IntMatrix r = *this;
  for (auto& v : r.e_) v *= s;
  return r;
}

IntMatrix IntMatrix::pow(unsigned k) const {
  IntMatrix result = identity(dim_);
  IntMatrix base = *this;
  while (k) {
    if (k & 1u) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

bool IntMatrix::is_scalar(BigInt* value) const {
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      if (i != j && (*this)(i, j) != 0) return false;
      if (i == j && (*this)(i, i) != (*this)(0, 0)) return false;
    }
  if (value && dim_ > 0) *value = (*this)(0, 0);
  return true;
}

bool IntMatrix::is_zero() const {
  for (const auto& v : e_)
    if (v != 0) return false;
  return true;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < dim_; ++i) {
    os << (i ? ",[" : "[");
    for (int j = 0; j < dim_; ++j) os << (j ? "," : "") << (*this)(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

std::optional<std::vector<IntegerEigenvalue>> exact_integer_spectrum(const SymMatrix& a) {
  if (!a.exact()) return std::nullopt;
  const auto dec = decompose(a);
  const Vec values = dec.eigenvalues();
  std::map<std::int64_t, int> counts;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double r = std::round(values(i));
    if (std::abs(values(i) - r) > 1e-6 * std::max(1.0, std::abs(r))) return std::nullopt;
    ++counts[static_cast<std::int64_t>(r)];
  }

  const IntMatrix m = IntMatrix::from_sym(a);
  const int d = m.dim();
  IntMatrix product = IntMatrix::identity(d);
  for (auto [mu, mult] : counts) product = product * (m - IntMatrix::identity(d).scaled(mu));
  if (!product.is_zero()) return std::nullopt;

  IntMatrix mp = IntMatrix::identity(d);
  for (std::size_t p = 0; p <= counts.size(); ++p) {
    BigInt expected = 0;
    for (auto [mu, mult] : counts) expected += BigInt(mult) * boost::multiprecision::pow(BigInt(mu), static_cast<unsigned>(p));
    if (mp.trace() != expected) return std::nullopt;
    mp = mp * m;
  }

  std::vector<IntegerEigenvalue> out;
  for (auto [mu, mult] : counts) out.push_back({mu, mult});
  return out;
}

}  // namespace densilab
