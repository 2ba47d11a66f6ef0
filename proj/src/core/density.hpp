#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "region.hpp"
#include "spectral.hpp"

namespace densilab {

inline constexpr std::uint64_t kDefaultSamples = 1'000'000;

// |E ∩ A^{-j}K| / |A^{-j}K| estimated from `samples` uniform points of K.
struct DensityEstimate {
  int j = 0;
  double ratio = 0.0;
  double std_error = 0.0;  // sqrt(ratio (1 - ratio) / samples)
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
};

enum class Classification { ConvergesToOne, ConvergesToZero, Other };

std::string_view classification_name(Classification c);

// Limit heuristic. A series converges to a target when the distance e_j to
// the target is non-increasing (within `stderr_multiple` standard errors)
// over the last `trend_points` estimates and either the final distance is
// within `stderr_multiple` standard errors of zero, or it has shrunk to at
// most `contraction` times the first distance.
struct ClassifierOptions {
  double stderr_multiple = 3.0;
  int trend_points = 3;
  double contraction = 0.25;
};

struct DensitySeries {
  std::vector<DensityEstimate> estimates;
  Classification classification = Classification::Other;
  std::string note;
};

struct SamplingOptions {
  std::uint64_t samples = kDefaultSamples;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

// Samples y uniformly in the window K (rejection from its bounding cube) and
// counts A^{-j} y in E. The map may be any real expansive matrix.
DensityEstimate density_ratio(const Region& e, const Mat& a, int j, const Region& window,
                              const SamplingOptions& opts = {});
DensityEstimate density_ratio(const Region& e, const SymMatrix& a, int j, const Region& window,
                              const SamplingOptions& opts = {});

DensitySeries density_sweep(const Region& e, const Mat& a, const Region& window, int j_min,
                            int j_max, const SamplingOptions& opts = {},
                            const ClassifierOptions& classifier = {});
DensitySeries density_sweep(const Region& e, const SymMatrix& a, const Region& window, int j_min,
                            int j_max, const SamplingOptions& opts = {},
                            const ClassifierOptions& classifier = {});

Classification classify_series(const std::vector<DensityEstimate>& estimates,
                               const ClassifierOptions& opts, std::string* note = nullptr);

// |E_alpha^c ∩ A^{-j}Q_r| / |A^{-j}Q_r| for A = diag(l1, l2), in closed form.
double exact_ealpha_ratio(double l1, double l2, double alpha, int j, double window = 1.0);

struct CylinderReduction {
  Region base;           // F, in coordinates of `complement_basis`
  SymMatrix restricted;  // A restricted to Y^perp, same coordinates
  Mat complement_basis;
};

// Accepts a cylinder region, or an ealpha region in d > 2 whose free
// coordinates form the axis. Throws NotInvariant unless ||P_{Y^perp} A P_Y||
// <= tol ||A||.
CylinderReduction cylinder_reduce(const Region& e, const SymMatrix& a, double tol = 1e-9);

// Expansiveness of a general real matrix: all complex eigenvalues |.| > 1.
bool is_expansive_general(const Mat& a);

}  // namespace densilab
