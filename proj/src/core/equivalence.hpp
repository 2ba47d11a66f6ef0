#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "region.hpp"
#include "spectral.hpp"

namespace densilab {

enum class Certification { ExactInteger, Numeric };
enum class ObstructionKind { NotSimultaneouslyDiagonalizable, ExponentMismatch };

std::string_view certification_name(Certification c);
std::string_view obstruction_name(ObstructionKind k);

struct ExponentMismatch {
  int i;  // basis index of the reference exponent
  int l;  // first basis index that disagrees
  double t_i;
  double t_l;
};

struct Obstruction {
  ObstructionKind kind;
  std::optional<ExponentMismatch> mismatch;
};

// Outcome of the decision E_{A1} == E_{A2}. `equivalent` holds exactly when
// `exponent` is set and `obstruction` is not.
struct EquivalenceVerdict {
  bool equivalent = false;
  std::optional<double> exponent;
  std::optional<Mat> common_basis;
  std::optional<Obstruction> obstruction;
  Certification certification = Certification::Numeric;
  // |eigenvalue| of A1 and A2 along each common basis vector.
  std::vector<std::pair<double, double>> eigen_pairs;
};

struct EquivalenceOptions {
  double tol = kDefaultTolerance;
  // |t_i - t_l| <= exponent_tol * max(1, |t_i|) counts as agreement.
  double exponent_tol = 1e-9;
};

// Common orthonormal eigenbasis, or nullopt when ||A1 A2 - A2 A1|| exceeds
// tol ||A1|| ||A2||.
std::optional<Mat> simultaneous_diagonalization(const SymMatrix& a1, const SymMatrix& a2,
                                                double tol = kDefaultTolerance);

EquivalenceVerdict decide_equivalence(const SymMatrix& a1, const SymMatrix& a2,
                                      const EquivalenceOptions& opts = {});

// Integer |eigenvalue| pairs along a common basis, when both maps have an
// exactly certified integer spectrum and every pair matches it.
std::optional<std::vector<std::pair<std::uint64_t, std::uint64_t>>> integer_eigen_pairs(
    const SymMatrix& a1, const SymMatrix& a2, const std::vector<std::pair<double, double>>& pairs);

// C^{-1} E, i.e. the region {x : C x in E}. Density of E under A matches
// density of the returned region under C^{-1} A C.
Region conjugate_decision_transport(const Mat& c, const SymMatrix& a, const Region& e);

}  // namespace densilab
