#include <doctest.h>

#include <cmath>
#include <random>

#include "density.hpp"
#include "equivalence.hpp"
#include "error.hpp"

using namespace densilab;

namespace {

Mat rotation(double theta) {
  Mat r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

Mat random_orthogonal(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = g(rng);
  Eigen::HouseholderQR<Mat> qr(m);
  return qr.householderQ() * Mat::Identity(d, d);
}

SymMatrix conj(const Mat& q, const Vec& values) { return SymMatrix(q * values.asDiagonal() * q.transpose()); }

// Each column is an eigenvector of m.
bool diagonalizes(const Mat& basis, const Mat& m) {
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    const Vec u = basis.col(c);
    const double mu = u.dot(m * u);
    if ((m * u - mu * u).norm() > 1e-9 * std::max(1.0, m.norm())) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("simultaneous diagonalization examples") {
  auto b = simultaneous_diagonalization(SymMatrix::diagonal({2, 4}), SymMatrix::diagonal({3, 9}));
  REQUIRE(b.has_value());
  CHECK((b->cwiseAbs() - Mat::Identity(2, 2)).norm() < 1e-15);

  const auto a = SymMatrix::from_rows({{3, 1}, {1, 3}});
  auto c = simultaneous_diagonalization(a, power(a, 2));
  REQUIRE(c.has_value());
  const double h = 1 / std::sqrt(2.0);
  // ascending eigenvalues of A: (1,-1) then (1,1)
  CHECK(std::abs(std::abs(c->col(0).dot(Vec::Constant(2, h)))) < 1e-12);
  CHECK(std::abs(std::abs(c->col(1).dot(Vec::Constant(2, h))) - 1) < 1e-12);

  const Mat r = rotation(M_PI / 4);
  const SymMatrix rotated(r * SymMatrix::diagonal({2, 4}).entries() * r.transpose());
  CHECK_FALSE(simultaneous_diagonalization(SymMatrix::diagonal({2, 4}), rotated).has_value());
}

TEST_CASE("decide_equivalence examples") {
  auto v = decide_equivalence(SymMatrix::diagonal({2, 4}), SymMatrix::diagonal({4, 16}));
  CHECK(v.equivalent);
  REQUIRE(v.exponent.has_value());
  CHECK(*v.exponent == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_FALSE(v.obstruction.has_value());
  CHECK(v.certification == Certification::ExactInteger);

  auto n = decide_equivalence(SymMatrix::diagonal({2, 4}), SymMatrix::diagonal({2, 8}));
  CHECK_FALSE(n.equivalent);
  CHECK_FALSE(n.exponent.has_value());
  REQUIRE(n.obstruction.has_value());
  CHECK(n.obstruction->kind == ObstructionKind::ExponentMismatch);
  REQUIRE(n.obstruction->mismatch.has_value());
  CHECK(n.obstruction->mismatch->t_i == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(n.obstruction->mismatch->t_l == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(n.certification == Certification::ExactInteger);

  const auto a = SymMatrix::from_rows({{3, 1}, {1, 3}});
  auto s = decide_equivalence(a, a);
  CHECK(s.equivalent);
  CHECK(*s.exponent == doctest::Approx(1.0).epsilon(1e-15));

  auto neg = decide_equivalence(SymMatrix::diagonal({-2, 4}), SymMatrix::diagonal({4, 16}));
  CHECK(neg.equivalent);
  CHECK(*neg.exponent == doctest::Approx(2.0).epsilon(1e-15));

  // dilations are always equivalent
  auto dil = decide_equivalence(SymMatrix::scalar(2, 2), SymMatrix::scalar(2, 3));
  CHECK(dil.equivalent);
  CHECK(*dil.exponent == doctest::Approx(std::log(3.0) / std::log(2.0)).epsilon(1e-14));

  // log 3 / log 2 = log 9 / log 4 certified through common bases
  auto cb = decide_equivalence(SymMatrix::diagonal({2, 4}), SymMatrix::diagonal({3, 9}));
  CHECK(cb.equivalent);
  CHECK(cb.certification == Certification::ExactInteger);

  const Mat r = rotation(M_PI / 4);
  auto nd = decide_equivalence(SymMatrix::diagonal({2, 4}),
                               SymMatrix(r * SymMatrix::diagonal({2, 4}).entries() * r.transpose()));
  CHECK_FALSE(nd.equivalent);
  REQUIRE(nd.obstruction.has_value());
  CHECK(nd.obstruction->kind == ObstructionKind::NotSimultaneouslyDiagonalizable);
}

TEST_CASE("decide_equivalence errors") {
  try {
    decide_equivalence(SymMatrix::diagonal({1, 3}), SymMatrix::diagonal({2, 4}));
    FAIL("expected NotExpansive");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotExpansive);
  }
  CHECK_THROWS_AS(decide_equivalence(SymMatrix::diagonal({2, 4}), SymMatrix::diagonal({2, 4, 8})), Error);
}

TEST_CASE("reflexivity and symmetry") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> mag(1.1, 9.0), tt(0.2, 5.0);
  std::bernoulli_distribution sign(0.3);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 5;
    const Mat q = random_orthogonal(d, rng);
    Vec values(d);
    for (int i = 0; i < d; ++i) values(i) = (sign(rng) ? -1 : 1) * mag(rng);
    const SymMatrix a = conj(q, values);
    const auto self = decide_equivalence(a, a);
    REQUIRE(self.equivalent);
    CHECK(*self.exponent == doctest::Approx(1.0).epsilon(1e-9));

    const double t = tt(rng);
    const SymMatrix b = power(absolutize(a), t);
    const auto ab = decide_equivalence(a, b);
    const auto ba = decide_equivalence(b, a);
    REQUIRE(ab.equivalent);
    REQUIRE(ba.equivalent);
    CHECK(*ab.exponent * *ba.exponent == doctest::Approx(1.0).epsilon(1e-9));
    // verdict invariant: A1'^t reproduces A2'
    const Mat diff = power(absolutize(a), *ab.exponent).entries() - absolutize(b).entries();
    CHECK(diff.norm() <= 1e-8 * b.norm());
  }
}

TEST_CASE("transitivity on diagonal triples") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> mag(1.1, 9.0), tt(0.3, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 4;
    std::vector<double> a(static_cast<std::size_t>(d));
    for (auto& x : a) x = mag(rng);
    const double t1 = tt(rng), t2 = tt(rng);
    std::vector<double> b, c;
    for (double x : a) {
      b.push_back(std::pow(x, t1));
      c.push_back(std::pow(x, t1 * t2));
    }
    const auto ab = decide_equivalence(SymMatrix::diagonal(a), SymMatrix::diagonal(b));
    const auto bc = decide_equivalence(SymMatrix::diagonal(b), SymMatrix::diagonal(c));
    const auto ac = decide_equivalence(SymMatrix::diagonal(a), SymMatrix::diagonal(c));
    REQUIRE(ab.equivalent);
    REQUIRE(bc.equivalent);
    REQUIRE(ac.equivalent);
    CHECK(*ac.exponent == doctest::Approx(*ab.exponent * *bc.exponent).epsilon(1e-9));
  }
}

TEST_CASE("scale coherence") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> mag(1.05, 12.0), tt(0.1, 6.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 6;
    const Mat q = random_orthogonal(d, rng);
    Vec values(d);
    for (int i = 0; i < d; ++i) values(i) = mag(rng);
    const SymMatrix a = conj(q, values);
    const double t = tt(rng);
    const auto v = decide_equivalence(a, power(a, t));
    REQUIRE(v.equivalent);
    CHECK(std::abs(*v.exponent - t) <= 1e-6 * t);
    REQUIRE(v.common_basis.has_value());
    CHECK(diagonalizes(*v.common_basis, a.entries()));
  }
}

TEST_CASE("equal moduli give exponent one") {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> mag(1.1, 9.0);
  std::bernoulli_distribution sign(0.5);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 5;
    const Mat q = random_orthogonal(d, rng);
    Vec v1(d), v2(d);
    for (int i = 0; i < d; ++i) {
      const double m = mag(rng);
      v1(i) = (sign(rng) ? -1 : 1) * m;
      v2(i) = (sign(rng) ? -1 : 1) * m;
    }
    const auto v = decide_equivalence(conj(q, v1), conj(q, v2));
    REQUIRE(v.equivalent);
    CHECK(*v.exponent == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("independent spectra are not equivalent") {
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> mag(1.1, 9.0);
  int checked = 0;
  while (checked < 200) {
    const double a1 = mag(rng), a2 = mag(rng), b1 = mag(rng), b2 = mag(rng);
    const double t1 = std::log(b1) / std::log(a1), t2 = std::log(b2) / std::log(a2);
    if (std::abs(t1 - t2) < 1e-3 || std::abs(a1 - a2) < 1e-3) continue;
    ++checked;
    const auto v = decide_equivalence(SymMatrix::diagonal({a1, a2}), SymMatrix::diagonal({b1, b2}));
    CHECK_FALSE(v.equivalent);
    REQUIRE(v.obstruction.has_value());
    CHECK(v.obstruction->kind == ObstructionKind::ExponentMismatch);
    CHECK(v.certification == Certification::Numeric);
  }
}

TEST_CASE("integer eigen pairs") {
  const auto a1 = SymMatrix::from_rows({{3, 1}, {1, 3}});
  const auto a2 = SymMatrix::from_rows({{10, 6}, {6, 10}});
  const auto v = decide_equivalence(a1, a2);
  REQUIRE(v.equivalent);
  CHECK(*v.exponent == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(v.certification == Certification::ExactInteger);
  const auto pairs = integer_eigen_pairs(a1, a2, v.eigen_pairs);
  REQUIRE(pairs.has_value());
  CHECK(*pairs == std::vector<std::pair<std::uint64_t, std::uint64_t>>{{2, 4}, {4, 16}});
  CHECK_FALSE(integer_eigen_pairs(SymMatrix::diagonal({1.5, 3}), SymMatrix::diagonal({2, 4}),
                                  {{1.5, 2}, {3, 4}})
                  .has_value());
}

TEST_CASE("conjugation transport") {
  const auto a = SymMatrix::diagonal({2, 4});
  const auto ball = Region::ball(2, 1);
  const auto same = conjugate_decision_transport(Mat::Identity(2, 2), a, ball);
  Mat c(2, 2);
  c << 2, 0, 0, 1;
  const auto ellipse = conjugate_decision_transport(c, a, ball);
  std::mt19937_64 rng(36);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 1000; ++k) {
    Vec x(2);
    x << u(rng), u(rng);
    CHECK(same.contains(x) == ball.contains(x));
    CHECK(ellipse.contains(x) == (4 * x(0) * x(0) + x(1) * x(1) < 1));
  }
  try {
    conjugate_decision_transport(Mat::Zero(2, 2), a, ball);
    FAIL("expected SingularMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMatrix);
  }

  // rotated witness set under the rotated map
  const Mat r = rotation(M_PI / 4);
  const auto e = Region::ealpha(2, 3.0);
  const auto e_rot = conjugate_decision_transport(r, a, e);
  const SymMatrix a_rot(r.inverse() * a.entries() * r);
  const auto window = Region::preimage(Region::cube(2, 1), r);
  SamplingOptions o;
  o.samples = 100000;
  for (int j = 0; j <= 4; ++j) {
    o.seed = 100 + static_cast<std::uint64_t>(j);
    const auto base = density_ratio(e, a, j, Region::cube(2, 1), o);
    const auto moved = density_ratio(e_rot, a_rot, j, window, o);
    CHECK(std::abs(base.ratio - moved.ratio) <= 3 * std::hypot(base.std_error, moved.std_error));
  }
}
