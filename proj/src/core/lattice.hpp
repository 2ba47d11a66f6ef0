#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "equivalence.hpp"
#include "exact.hpp"
#include "numbertheory.hpp"
#include "spectral.hpp"

namespace densilab {

// A(Z^d) ⊂ Z^d in the canonical basis.
bool check_lattice_condition(const SymMatrix& a);

// Both roots of x^2 - trace x + det lie outside the closed unit disc.
bool is_expanding(const IntMatrix& m);

enum class SimilarityClass { A1, A2, PlusA3, MinusA3, PlusA4, MinusA4 };

std::string_view similarity_class_name(SimilarityClass c);
// Normal-form representative of each class.
IntMatrix class_representative(SimilarityClass c);
// Class of an expanding 2x2 integer matrix with |det| = 2 from (det, trace).
std::optional<SimilarityClass> class_from_invariants(const BigInt& det, const BigInt& trace);

struct RootOfIdentity {
  int l;
  BigInt n;
  bool operator==(const RootOfIdentity&) const = default;
};

struct LatticeClassification {
  BigInt det;
  BigInt trace;
  bool expanding = false;
  std::optional<SimilarityClass> similarity_class;
  std::optional<IntMatrix> conjugator;  // C with C^{-1} R C == M
  bool witness_not_found = false;       // no conjugator within search_bound
  int search_bound = 0;
  std::optional<RootOfIdentity> root_of_identity;
};

inline constexpr int kDefaultSearchBound = 10;
inline constexpr int kDefaultLMax = 12;

// Unimodular C with |entries| <= bound and x C == C y, identity first then
// by growing max-norm shells. 2x2 only.
std::optional<IntMatrix> find_intertwiner(const IntMatrix& x, const IntMatrix& y, int bound);

// Throws NotExpanding, WrongDeterminant (|det| != 2).
LatticeClassification classify_det2(const IntMatrix& m, int bound = kDefaultSearchBound,
                                    int l_max = kDefaultLMax);

// Smallest l in 1..l_max with M^l = n I, n a positive integer.
std::optional<RootOfIdentity> minimal_root_of_identity(const IntMatrix& m, int l_max = kDefaultLMax);

// Trace/det conditions of the power table for l in {3, 4, 6, 8, 12}.
// Throws PreconditionViolated unless det > 0 with non-real eigenvalues,
// BadRow for other l.
bool verify_theoremE_row(const IntMatrix& m, int l, const BigInt& n);

// det M < 0: M^2 = -det I iff trace M = 0. Throws WrongSign, NotExpanding.
bool corollaryD_check(const IntMatrix& m);

// (l, n) predicted by the power table and the det < 0 rule, including the
// scalar case M = cI. Requires a 2x2 expanding matrix.
std::optional<RootOfIdentity> predicted_root_of_identity(const IntMatrix& m);

// Companion matrix [[0, -p], [1, s]] of x^2 - s x + p with distinct roots,
// both satisfying lambda^l = n. Non-real roots are tried first.
std::optional<IntMatrix> theoremC_witness(int l, std::uint64_t n);

// M A == A D P with det A = ±1, and |d_i d_pi(i) ... d_pi^{d-1}(i)| > 1 for
// all i, where P e_j = e_pi(j). Throws NotUnimodular; BadParameter when D is
// not diagonal or P not a permutation.
bool verify_factorization(const IntMatrix& m, const IntMatrix& a, const IntMatrix& d,
                          const IntMatrix& p);

struct Factorization {
  IntMatrix a;
  IntMatrix d;
  IntMatrix p;
};

// 2x2 with M^2 = ±2I: M = A S Pi A^{-1}, S = diag(2, ±1), Pi the swap,
// A found by bounded search.
std::optional<Factorization> lemmaG_factorization(const IntMatrix& m, int bound = kDefaultSearchBound);

using nt::multiplicative_dependence;
using nt::perfect_power;

struct RationalExponent {
  int p;
  int q;
  std::vector<std::uint64_t> bases;  // |lambda_j^(1)| = bases[j]^q
};

struct CommonBase {
  std::uint64_t a;
  std::uint64_t b;
  std::vector<int> n;  // |lambda_j^(1)| = a^n_j
  std::vector<int> m;  // |lambda_j^(2)| = b^m_j
  int q;               // gcd(n_j)
  int m_total;         // t = m_total / q * log b / log a
  double t;
};

struct TrivialEquivalenceWitness {
  std::variant<RationalExponent, CommonBase> kind;
  // |lambda^(1)|, |lambda^(2)| along the common basis
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
};

// Re-checks the witness by exact integer arithmetic.
bool verify_witness(const TrivialEquivalenceWitness& w);

// Throws PreconditionViolated unless both maps are integer, equivalent with
// exponent t, with integer |eigenvalues| along the common basis.
std::optional<TrivialEquivalenceWitness> trivially_equivalent(const SymMatrix& a1, const SymMatrix& a2,
                                                              double t);

enum class MraStatus { NotEquivalent, EquivalentTrivially, EquivalentNumericOnly };
std::string_view mra_status_name(MraStatus s);

struct MraReport {
  MraStatus status = MraStatus::NotEquivalent;
  bool lattice_ok = false;
  std::optional<EquivalenceVerdict> verdict;
  std::optional<TrivialEquivalenceWitness> witness;
  std::string note;
};

MraReport mra_equivalence_report(const SymMatrix& a1, const SymMatrix& a2);

struct DyadicResult {
  bool dyadic = false;
  std::optional<double> scale;     // c with A' = c I
  std::optional<double> exponent;  // (2I)^t = A'
  Certification certification = Certification::Numeric;
};

// A' = c I with c > 1. Throws NotExpansive.
DyadicResult dyadic_class(const SymMatrix& a, double tol = kDefaultTolerance);

}  // namespace densilab
