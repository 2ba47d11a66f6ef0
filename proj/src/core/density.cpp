#include "density.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "error.hpp"
#include "rng.hpp"

namespace densilab {

namespace {

constexpr std::uint64_t kBatchSize = 1u << 16;
// A window must accept at least one draw in kMaxRejection.
constexpr std::uint64_t kMaxRejection = 1000;
constexpr std::uint64_t kRejectionProbe = 10000;

struct BatchResult {
  std::uint64_t hits = 0;
  std::uint64_t accepted = 0;
};

BatchResult run_batch(const Region& e, const Mat& inverse_power, const Region& window,
                      double half_width, int j, std::uint64_t batch, std::uint64_t count,
                      std::uint64_t seed) {
  const auto d = static_cast<Eigen::Index>(window.dim());
  CounterRng rng(seed, static_cast<std::uint64_t>(static_cast<std::int64_t>(j)), batch);
  std::vector<double> y(static_cast<std::size_t>(d));
  std::vector<double> x(static_cast<std::size_t>(d));
  BatchResult out;
  std::uint64_t attempts = 0;
  while (out.accepted < count) {
    for (Eigen::Index i = 0; i < d; ++i) y[i] = (2.0 * rng.uniform() - 1.0) * half_width;
    ++attempts;
    if (!window.contains(y)) {
      if (attempts >= kRejectionProbe && out.accepted * kMaxRejection < attempts)
        throw Error(ErrorCode::DegenerateWindow, "window rejection rate exceeds 99.9%");
      continue;
    }
    ++out.accepted;
    for (Eigen::Index r = 0; r < d; ++r) {
      double s = 0.0;
      for (Eigen::Index c = 0; c < d; ++c) s += inverse_power(r, c) * y[c];
      x[r] = s;
    }
    if (e.contains(x)) ++out.hits;
  }
  return out;
}

DensityEstimate estimate(const Region& e, const Mat& inverse_power, int j, const Region& window,
                         const SamplingOptions& opts) {
  if (e.dim() != window.dim() || inverse_power.rows() != e.dim())
    throw Error(ErrorCode::BadParameter, "region, window and map dimensions differ");
  if (opts.samples == 0) throw Error(ErrorCode::BadParameter, "samples must be positive");
  const auto half_width = window.bounding_half_width();
  if (!half_width) throw Error(ErrorCode::BadParameter, "window must be bounded");
  if (!window.contains(Vec::Zero(window.dim())))
    throw Error(ErrorCode::BadParameter, "window must contain the origin");

  const std::uint64_t batches = (opts.samples + kBatchSize - 1) / kBatchSize;
  std::vector<BatchResult> results(batches);
  auto do_batch = [&](std::uint64_t b) {
    const std::uint64_t count = std::min(kBatchSize, opts.samples - b * kBatchSize);
    results[b] = run_batch(e, inverse_power, window, *half_width, j, b, count, opts.seed);
  };

  unsigned workers = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, batches));
  if (workers <= 1) {
    for (std::uint64_t b = 0; b < batches; ++b) do_batch(b);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::uint64_t b = w; b < batches; b += workers) do_batch(b);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  DensityEstimate out;
  out.j = j;
  for (const auto& r : results) {
    out.hits += r.hits;
    out.samples += r.accepted;
  }
  out.ratio = static_cast<double>(out.hits) / static_cast<double>(out.samples);
  out.std_error = std::sqrt(out.ratio * (1.0 - out.ratio) / static_cast<double>(out.samples));
  return out;
}

Mat general_inverse_power(const Mat& a, int j) {
  Mat base = j >= 0 ? Mat(a.inverse()) : a;
  unsigned k = static_cast<unsigned>(j >= 0 ? j : -j);
  Mat result = Mat::Identity(a.rows(), a.cols());
  while (k) {
    if (k & 1u) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

Mat symmetric_inverse_power(const SymMatrix& a, int j) {
  const auto dec = decompose(a);
  Vec values = dec.eigenvalues();
  for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = std::pow(values(i), -j);
  return assemble(dec, values);
}

// e_k: distance of each estimate to the target value.
bool converges(const std::vector<double>& dist, const std::vector<double>& se,
               const ClassifierOptions& opts, std::string& how) {
  const std::size_t n = dist.size();
  const double m = opts.stderr_multiple;
  for (std::size_t k = n - static_cast<std::size_t>(opts.trend_points) + 1; k < n; ++k)
    if (dist[k] > dist[k - 1] + m * (se[k] + se[k - 1])) return false;
  if (dist.back() <= m * se.back()) {
    how = "final estimate within " + std::to_string(m) + " standard errors of the limit";
    return true;
  }
  if (dist.back() <= opts.contraction * dist.front()) {
    std::ostringstream os;
    os << "distance to limit contracted from " << dist.front() << " to " << dist.back();
    how = os.str();
    return true;
  }
  return false;
}

}  // namespace

std::string_view classification_name(Classification c) {
  switch (c) {
    case Classification::ConvergesToOne: return "ConvergesToOne";
    case Classification::ConvergesToZero: return "ConvergesToZero";
    case Classification::Other: return "Other";
  }
  return "Other";
}

bool is_expansive_general(const Mat& a) {
  if (a.rows() != a.cols() || a.rows() == 0) return false;
  Eigen::EigenSolver<Mat> solver(a, false);
  if (solver.info() != Eigen::Success) return false;
  return (solver.eigenvalues().cwiseAbs().array() > 1.0).all();
}

DensityEstimate density_ratio(const Region& e, const Mat& a, int j, const Region& window,
                              const SamplingOptions& opts) {
  if (!is_expansive_general(a)) throw Error(ErrorCode::NotExpansive, "density requires an expansive map");
  return estimate(e, general_inverse_power(a, j), j, window, opts);
}

DensityEstimate density_ratio(const Region& e, const SymMatrix& a, int j, const Region& window,
                              const SamplingOptions& opts) {
  if (!is_expansive(a)) throw Error(ErrorCode::NotExpansive, "density requires an expansive map");
  return estimate(e, symmetric_inverse_power(a, j), j, window, opts);
}

Classification classify_series(const std::vector<DensityEstimate>& estimates,
                               const ClassifierOptions& opts, std::string* note) {
  if (opts.trend_points < 2 || !(opts.stderr_multiple >= 0.0) || !(opts.contraction > 0.0))
    throw Error(ErrorCode::BadParameter, "invalid classifier options");
  if (estimates.size() < static_cast<std::size_t>(opts.trend_points)) {
    if (note) *note = "too few points for a trend";
    return Classification::Other;
  }
  std::vector<double> to_one, to_zero, se;
  for (const auto& est : estimates) {
    to_one.push_back(1.0 - est.ratio);
    to_zero.push_back(est.ratio);
    se.push_back(est.std_error);
  }
  std::string how;
  if (converges(to_one, se, opts, how)) {
    if (note) *note = "heuristic: " + how;
    return Classification::ConvergesToOne;
  }
  if (converges(to_zero, se, opts, how)) {
    if (note) *note = "heuristic: " + how;
    return Classification::ConvergesToZero;
  }
  if (note) *note = "heuristic: no monotone contraction toward 0 or 1";
  return Classification::Other;
}

namespace {
DensitySeries sweep(int j_min, int j_max, const ClassifierOptions& classifier,
                    const std::function<DensityEstimate(int)>& at) {
  if (j_max < j_min) throw Error(ErrorCode::BadParameter, "j_max must be >= j_min");
  DensitySeries series;
  for (int j = j_min; j <= j_max; ++j) series.estimates.push_back(at(j));
  series.classification = classify_series(series.estimates, classifier, &series.note);
  return series;
}
}  // namespace

DensitySeries density_sweep(const Region& e, const Mat& a, const Region& window, int j_min,
                            int j_max, const SamplingOptions& opts,
                            const ClassifierOptions& classifier) {
  if (!is_expansive_general(a)) throw Error(ErrorCode::NotExpansive, "density requires an expansive map");
  return sweep(j_min, j_max, classifier, [&](int j) {
    return estimate(e, general_inverse_power(a, j), j, window, opts);
  });
}

DensitySeries density_sweep(const Region& e, const SymMatrix& a, const Region& window, int j_min,
                            int j_max, const SamplingOptions& opts,
                            const ClassifierOptions& classifier) {
  if (!is_expansive(a)) throw Error(ErrorCode::NotExpansive, "density requires an expansive map");
  return sweep(j_min, j_max, classifier, [&](int j) {
    return estimate(e, symmetric_inverse_power(a, j), j, window, opts);
  });
}

double exact_ealpha_ratio(double l1, double l2, double alpha, int j, double window) {
  if (!(l1 > 1.0) || !(l2 > 1.0) || !(alpha > 0.0) || j < 0 || !(window > 0.0) ||
      !std::isfinite(l1 * l2 * alpha * window))
    throw Error(ErrorCode::BadParameter, "exact_ealpha_ratio needs l1, l2 > 1, alpha > 0, j >= 0");
  // Quarter window [0, a] x [0, b]; the complement is {x2 < x1^alpha}.
  const double a = window * std::pow(l1, -j);
  const double b = window * std::pow(l2, -j);
  const double knee = std::pow(b, 1.0 / alpha);  // x1^alpha reaches b here
  if (knee >= a) {
    // integral_0^a x^alpha dx / (a b)
    return std::pow(a, alpha) / (b * (alpha + 1.0));
  }
  // [knee^(alpha+1)/(alpha+1) + b (a - knee)] / (a b), with knee^alpha = b.
  return 1.0 - (knee / a) * alpha / (alpha + 1.0);
}

CylinderReduction cylinder_reduce(const Region& e, const SymMatrix& a, double tol) {
  if (e.dim() != a.dim()) throw Error(ErrorCode::BadParameter, "region and map dimensions differ");
  const int d = a.dim();
  Mat axis, comp;
  std::optional<Region> base;
  if (const auto* cyl = std::get_if<shape::Cylinder>(&e.node().shape)) {
    axis = cyl->axis;
    comp = cyl->complement_basis;
    base = cyl->base;
  } else if (const auto* ea = std::get_if<shape::EAlpha>(&e.node().shape)) {
    comp = Mat::Zero(d, 2);
    comp(ea->i, 0) = 1.0;
    comp(ea->l, 1) = 1.0;
    axis = Mat::Zero(d, d - 2);
    for (int k = 0, c = 0; k < d; ++k)
      if (k != ea->i && k != ea->l) axis(k, c++) = 1.0;
    base = Region::ealpha(2, ea->alpha, 0, 1);
  } else {
    throw Error(ErrorCode::BadParameter, "cylinder_reduce needs a cylinder or ealpha region");
  }
  if (axis.cols() > 0) {
    const double leak = (comp * comp.transpose() * a.entries() * axis * axis.transpose()).norm();
    if (leak > tol * std::max(1.0, a.norm()))
      throw Error(ErrorCode::NotInvariant, "axis subspace is not invariant under the map");
  }
  SymMatrix restricted(comp.transpose() * a.entries() * comp);
  return CylinderReduction{*base, restricted, comp};
}

}  // namespace densilab
