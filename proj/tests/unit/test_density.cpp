#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "density.hpp"
#include "error.hpp"

using namespace densilab;

namespace {

SamplingOptions opts(std::uint64_t n, std::uint64_t seed = 0, unsigned threads = 0) {
  SamplingOptions o;
  o.samples = n;
  o.seed = seed;
  o.threads = threads;
  return o;
}

// Numeric quadrature of (1 / ab) * int_0^a min(x^alpha, b) dx. The kink is
// located by a bracketing root finder, then each smooth piece is integrated
// on its own (tanh-sinh copes with the x^alpha endpoint singularity).
double quadrature_ratio(double l1, double l2, double alpha, int j, double r = 1.0) {
  const double a = r * std::pow(l1, -j), b = r * std::pow(l2, -j);
  double knee = a;
  if (std::pow(a, alpha) > b) {
    std::uintmax_t iters = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        [&](double x) { return std::pow(x, alpha) - b; }, 0.0, a, -b, std::pow(a, alpha) - b,
        boost::math::tools::eps_tolerance<double>(52), iters);
    knee = (bracket.first + bracket.second) / 2;
  }
  boost::math::quadrature::tanh_sinh<double> ts;
  double integral = ts.integrate([&](double x) { return std::pow(x, alpha); }, 0.0, knee);
  if (knee < a)
    integral += boost::math::quadrature::gauss_kronrod<double, 15>::integrate([&](double) { return b; }, knee, a);
  return integral / (a * b);
}

Mat col2(double a, double b) {
  Mat m(2, 1);
  m << a, b;
  return m;
}

}  // namespace

TEST_CASE("all space has ratio one") {
  const auto a = SymMatrix::diagonal({2, 4});
  for (int j = 0; j < 4; ++j) {
    const auto est = density_ratio(Region::all_space(2), a, j, Region::cube(2, 1), opts(5000));
    CHECK(est.ratio == 1.0);
    CHECK(est.std_error == 0.0);
    CHECK(est.samples == 5000);
  }
}

TEST_CASE("closed form complement ratio: worked values") {
  for (int j = 0; j <= 8; ++j) CHECK(exact_ealpha_ratio(2, 4, 2, j) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(exact_ealpha_ratio(2, 4, 3, 1) == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
  CHECK(exact_ealpha_ratio(2, 4, 3, 2) == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
  CHECK(exact_ealpha_ratio(2, 4, 1, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(exact_ealpha_ratio(1, 4, 2, 0), Error);
  CHECK_THROWS_AS(exact_ealpha_ratio(2, 4, 0, 0), Error);
  CHECK_THROWS_AS(exact_ealpha_ratio(2, 4, 2, -1), Error);
}

TEST_CASE("closed form against numeric quadrature") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> lam(1.1, 6.0), al(0.3, 5.0), rr(0.2, 3.0);
  std::uniform_int_distribution<int> jj(0, 8);
  for (int trial = 0; trial < 300; ++trial) {
    const double l1 = lam(rng), l2 = lam(rng), alpha = al(rng), r = rr(rng);
    const int j = jj(rng);
    const double exact = exact_ealpha_ratio(l1, l2, alpha, j, r);
    const double quad = quadrature_ratio(l1, l2, alpha, j, r);
    CHECK(std::abs(exact - quad) <= 1e-10 * quad);
  }
}

TEST_CASE("Monte Carlo matches closed form") {
  const auto a = SymMatrix::diagonal({2, 4});
  const auto ec = Region::complement(Region::ealpha(2, 3.0));
  const auto est = density_ratio(ec, a, 1, Region::cube(2, 1), opts(200000, 3));
  CHECK(std::abs(est.ratio - 0.125) <= 4 * est.std_error);
  CHECK(est.std_error == doctest::Approx(std::sqrt(est.ratio * (1 - est.ratio) / 200000.0)));
  CHECK(est.hits + density_ratio(Region::ealpha(2, 3.0), a, 1, Region::cube(2, 1), opts(200000, 3)).hits == 200000);
}

TEST_CASE("sweep classifications") {
  const auto a = SymMatrix::diagonal({2, 4});
  const auto q = Region::cube(2, 1);
  auto s3 = density_sweep(Region::ealpha(2, 3.0), a, q, 0, 8, opts(100000, 1));
  CHECK(s3.classification == Classification::ConvergesToOne);
  CHECK(s3.estimates.size() == 9);
  CHECK(s3.note.rfind("heuristic", 0) == 0);
  auto s15 = density_sweep(Region::ealpha(2, 1.5), a, q, 0, 8, opts(100000, 1));
  CHECK(s15.classification == Classification::ConvergesToZero);
  auto g = density_sweep(Region::gdelta(1.0, col2(1, 0)), a, q, 0, 8, opts(100000, 1));
  CHECK(g.classification == Classification::ConvergesToOne);
  // critical exponent: ratio stays at 2/3
  auto s2 = density_sweep(Region::ealpha(2, 2.0), a, q, 0, 8, opts(100000, 1));
  CHECK(s2.classification == Classification::Other);
  // G_delta with U1 along the slower direction of a 3-cluster map
  auto g3 = density_sweep(Region::gdelta(0.5, col2(0, 1)), SymMatrix::diagonal({4, 2}), q, 0, 8, opts(100000, 1));
  CHECK(g3.classification == Classification::ConvergesToOne);
}

TEST_CASE("classifier on synthetic series") {
  auto series = [](std::vector<double> ratios, std::uint64_t n) {
    std::vector<DensityEstimate> out;
    int j = 0;
    for (double r : ratios) {
      DensityEstimate e;
      e.j = j++;
      e.ratio = r;
      e.samples = n;
      e.std_error = std::sqrt(r * (1 - r) / static_cast<double>(n));
      out.push_back(e);
    }
    return out;
  };
  const ClassifierOptions o;
  CHECK(classify_series(series({0.5, 0.8, 0.95, 1.0}, 1000), o) == Classification::ConvergesToOne);
  CHECK(classify_series(series({0.5, 0.2, 0.05, 0.0}, 1000), o) == Classification::ConvergesToZero);
  CHECK(classify_series(series({0.5, 0.5, 0.5, 0.5}, 1000000), o) == Classification::Other);
  CHECK(classify_series(series({0.1, 0.9, 0.1, 0.9}, 1000000), o) == Classification::Other);
  CHECK(classify_series(series({0.9}, 1000), o) == Classification::Other);
  ClassifierOptions bad;
  bad.trend_points = 1;
  CHECK_THROWS_AS(classify_series(series({0.9, 0.95}, 10), bad), Error);
}

TEST_CASE("errors") {
  const auto a = SymMatrix::diagonal({2, 4});
  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode{};
  };
  CHECK(code_of([&] { density_ratio(Region::ealpha(2, 2), SymMatrix::diagonal({1, 4}), 0, Region::cube(2, 1)); }) ==
        ErrorCode::NotExpansive);
  Mat thin(2, 2);
  thin << 1e4, 0, 0, 1;
  const auto sliver = Region::preimage(Region::ball(2, 1), thin);
  CHECK(code_of([&] { density_ratio(Region::ealpha(2, 2), a, 0, sliver, opts(1000)); }) == ErrorCode::DegenerateWindow);
  CHECK(code_of([&] { density_ratio(Region::ealpha(2, 2), a, 0, Region::ealpha(2, 2), opts(1000)); }) ==
        ErrorCode::BadParameter);
  CHECK(code_of([&] { density_ratio(Region::ealpha(2, 2), a, 0, Region::cube(2, 1), opts(0)); }) ==
        ErrorCode::BadParameter);
  CHECK(code_of([&] { density_sweep(Region::ealpha(2, 2), a, Region::cube(2, 1), 3, 2); }) == ErrorCode::BadParameter);
}

TEST_CASE("seed determinism across thread counts") {
  const auto a = SymMatrix::from_rows({{3, 1}, {1, 3}});
  const auto e = Region::ealpha(2, 1.2);
  // 200000 samples span four batches, the last partial
  const auto one = density_ratio(e, a, 2, Region::ball(2, 1), opts(200000, 42, 1));
  const auto four = density_ratio(e, a, 2, Region::ball(2, 1), opts(200000, 42, 4));
  CHECK(one.hits == four.hits);
  CHECK(one.ratio == four.ratio);
  const auto other = density_ratio(e, a, 2, Region::ball(2, 1), opts(200000, 43, 4));
  CHECK(other.hits != one.hits);
}

TEST_CASE("general maps and expansiveness") {
  Mat m(2, 2);
  m << 1, 1, -1, 1;
  CHECK(is_expansive_general(m));
  m << 2, 5, 0, 0.5;
  CHECK_FALSE(is_expansive_general(m));
  CHECK_FALSE(is_expansive_general(Mat(2, 3)));
  // symmetric overload and general overload agree bit for bit
  const auto s = SymMatrix::diagonal({2, 4});
  const auto e = Region::ealpha(2, 2.5);
  const auto x = density_ratio(e, s, 3, Region::cube(2, 1), opts(50000, 5));
  const auto y = density_ratio(e, s.entries(), 3, Region::cube(2, 1), opts(50000, 5));
  CHECK(x.hits == y.hits);
}

TEST_CASE("cylinder reduction") {
  const auto a3 = SymMatrix::diagonal({2, 2, 4});
  const auto e3 = Region::ealpha(3, 3.0, 1, 2);
  const auto red = cylinder_reduce(e3, a3);
  CHECK(red.base.dim() == 2);
  CHECK((red.restricted.entries() - SymMatrix::diagonal({2, 4}).entries()).norm() == 0.0);
  for (int j = 0; j <= 3; ++j) {
    const auto full = density_ratio(e3, a3, j, Region::cube(3, 1), opts(100000, 8));
    const auto reduced = density_ratio(red.base, red.restricted, j, Region::cube(2, 1), opts(100000, 9));
    CHECK(std::abs(full.ratio - reduced.ratio) <= 3 * std::hypot(full.std_error, reduced.std_error));
  }
  // trivial axis
  const auto e2 = Region::ealpha(2, 2.0);
  const auto id = cylinder_reduce(e2, SymMatrix::diagonal({2, 4}));
  CHECK((id.restricted.entries() - SymMatrix::diagonal({2, 4}).entries()).norm() == 0.0);
  // coupled axis
  try {
    cylinder_reduce(e3, SymMatrix::from_rows({{2, 1, 0}, {1, 2, 0}, {0, 0, 4}}));
    FAIL("expected NotInvariant");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NotInvariant);
  }
  CHECK_THROWS_AS(cylinder_reduce(Region::ball(2, 1), SymMatrix::diagonal({2, 4})), Error);
}
