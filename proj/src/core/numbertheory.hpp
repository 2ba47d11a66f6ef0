#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace densilab::nt {

struct PrimePower {
  std::uint64_t prime;
  int exponent;
  bool operator==(const PrimePower&) const = default;
};

bool is_prime(std::uint64_t n);

// Ascending prime factorization; factorize(1) is empty.
std::vector<PrimePower> factorize(std::uint64_t n);

struct PerfectPower {
  std::uint64_t base;
  int exponent;
  bool operator==(const PerfectPower&) const = default;
};

// a = base^exponent with exponent maximal. Requires a >= 2.
PerfectPower perfect_power(std::uint64_t a);

struct Dependence {
  std::uint64_t base;  // not itself a perfect power
  int p;               // a = base^p
  int q;               // b = base^q
  bool operator==(const Dependence&) const = default;
};

// Present iff log a / log b is rational. Requires a, b >= 2.
std::optional<Dependence> multiplicative_dependence(std::uint64_t a, std::uint64_t b);

// Integer r with r^k == n, if one exists (n >= 0, k >= 1).
std::optional<std::uint64_t> exact_root(std::uint64_t n, int k);

}  // namespace densilab::nt
