#include "numbertheory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "error.hpp"

namespace densilab::nt {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Brent's variant of Pollard rho; n must be odd composite.
u64 pollard_rho(u64 n) {
  for (u64 c = 1;; ++c) {
    auto f = [&](u64 x) { return (mul_mod(x, x, n) + c) % n; };
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    const u64 block = 128;
    u64 r = 1;
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(block, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += block;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(u64 n, std::map<u64, int>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  const u64 d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic witness set for all 64-bit n.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<PrimePower> factorize(u64 n) {
  if (n == 0) throw Error(ErrorCode::BadParameter, "cannot factorize 0");
  std::map<u64, int> found;
  // Trial division by a 2,3,5 wheel for the small primes.
  for (u64 p : {2ull, 3ull, 5ull}) {
    while (n % p == 0) {
      ++found[p];
      n /= p;
    }
  }
  static constexpr u64 kWheel[] = {4, 2, 4, 2, 4, 6, 2, 6};
  u64 p = 7;
  for (int i = 0; p <= 1000 && p * p <= n; p += kWheel[i], i = (i + 1) % 8) {
    while (n % p == 0) {
      ++found[p];
      n /= p;
    }
  }
  factor_into(n, found);
  std::vector<PrimePower> out;
  for (auto [prime, e] : found) out.push_back({prime, e});
  return out;
}

PerfectPower perfect_power(u64 a) {
  if (a < 2) throw Error(ErrorCode::BadParameter, "perfect_power requires a >= 2");
  const auto f = factorize(a);
  int g = 0;
  for (const auto& pp : f) g = std::gcd(g, pp.exponent);
  u64 base = 1;
  for (const auto& pp : f)
    for (int i = 0; i < pp.exponent / g; ++i) base *= pp.prime;
  return {base, g};
}

std::optional<Dependence> multiplicative_dependence(u64 a, u64 b) {
  if (a < 2 || b < 2)
    throw Error(ErrorCode::BadParameter, "multiplicative_dependence requires a, b >= 2");
  const auto pa = perfect_power(a);
  const auto pb = perfect_power(b);
  if (pa.base != pb.base) return std::nullopt;
  return Dependence{pa.base, pa.exponent, pb.exponent};
}

std::optional<u64> exact_root(u64 n, int k) {
  if (k < 1) throw Error(ErrorCode::BadParameter, "root index must be >= 1");
  if (n < 2 || k == 1) return n;
  auto guess = static_cast<u64>(std::llround(std::pow(static_cast<double>(n), 1.0 / k)));
  for (u64 r = guess > 1 ? guess - 1 : 0; r <= guess + 1; ++r) {
    u128 acc = 1;
    bool over = false;
    for (int i = 0; i < k && !over; ++i) {
      acc *= r;
      over = acc > n;
    }
    if (!over && acc == n) return r;
  }
  return std::nullopt;
}

}  // namespace densilab::nt
