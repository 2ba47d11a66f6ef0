#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "spectral.hpp"

namespace densilab {

using BigInt = boost::multiprecision::cpp_int;

// Square integer matrix with arbitrary-precision entries, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(int dim) : dim_(dim), e_(static_cast<std::size_t>(dim) * dim) {}
  IntMatrix(int dim, std::initializer_list<std::int64_t> row_major);

  static IntMatrix identity(int dim);
  static IntMatrix two_by_two(BigInt a, BigInt b, BigInt c, BigInt d);
  // Throws PreconditionViolated unless `a` is an exact integer matrix.
  static IntMatrix from_sym(const SymMatrix& a);

  int dim() const noexcept { return dim_; }
  BigInt& operator()(int i, int j) { return e_[idx(i, j)]; }
  const BigInt& operator()(int i, int j) const { return e_[idx(i, j)]; }

  BigInt trace() const;
  // Fraction-free (Bareiss) elimination.
  BigInt det() const;

  IntMatrix operator*(const IntMatrix& o) const;
  IntMatrix operator-(const IntMatrix& o) const;
  IntMatrix scaled(const BigInt& s) const;
  IntMatrix pow(unsigned k) const;
  bool operator==(const IntMatrix& o) const = default;

  bool is_scalar(BigInt* value = nullptr) const;
  bool is_zero() const;
  std::string to_string() const;

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * dim_ + j; }
  int dim_ = 0;
  std::vector<BigInt> e_;
};

struct IntegerEigenvalue {
  std::int64_t value;
  int multiplicity;
};

// Spectrum of an exact integer symmetric matrix when every eigenvalue is an
// integer. Candidates come from the numeric decomposition; they are accepted
// only after exact checks: prod (A - mu_k I) == 0 and the power sums
// tr(A^p) == sum m_k mu_k^p for p = 1..k.
std::optional<std::vector<IntegerEigenvalue>> exact_integer_spectrum(const SymMatrix& a);

}  // namespace densilab
