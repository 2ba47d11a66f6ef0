#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "error.hpp"
#include "lattice.hpp"

using namespace densilab;

namespace {

using Big = boost::multiprecision::cpp_int;
using M2 = std::array<Big, 4>;

M2 mul(const M2& x, const M2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

// Smallest l <= l_max with M^l = n I, n > 0, by repeated multiplication.
std::optional<std::pair<int, Big>> brute_root(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d,
                                              int l_max) {
  const M2 m{a, b, c, d};
  M2 p = m;
  for (int l = 1; l <= l_max; ++l) {
    if (p[1] == 0 && p[2] == 0 && p[0] == p[3] && p[0] > 0) return std::make_pair(l, p[0]);
    p = mul(p, m);
  }
  return std::nullopt;
}

// Both complex roots strictly outside the unit circle, decided in floating
// point with a generous margin check; used only on small entries.
bool expanding_numeric(double a, double b, double c, double d) {
  const double tr = a + d, det = a * d - b * c;
  const double disc = tr * tr - 4 * det;
  if (disc < 0) return std::abs(det) > 1.0;
  const double s = std::sqrt(disc);
  return std::abs((tr + s) / 2) > 1.0 + 1e-12 && std::abs((tr - s) / 2) > 1.0 + 1e-12;
}

IntMatrix mat(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) { return IntMatrix(2, {a, b, c, d}); }

IntMatrix inverse_unimodular(const IntMatrix& c) {
  const BigInt det = c.det();
  return IntMatrix::two_by_two(c(1, 1) * det, -c(0, 1) * det, -c(1, 0) * det, c(0, 0) * det);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

}  // namespace

TEST_CASE("lattice condition") {
  CHECK(check_lattice_condition(SymMatrix::diagonal({2, 4})));
  CHECK_FALSE(check_lattice_condition(SymMatrix::diagonal({1.5, 3})));
  const double r = std::sqrt(2.0);
  CHECK_FALSE(check_lattice_condition(SymMatrix::from_rows({{r, r}, {r, -r}})));
}

TEST_CASE("expanding predicate agrees with floating roots") {
  int checked = 0;
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b)
      for (int c = -4; c <= 4; ++c)
        for (int d = -4; d <= 4; ++d) {
          const double det = a * d - b * c, tr = a + d;
          // skip inputs with a root on or within 1e-9 of the unit circle
          if (std::abs(std::abs(det) - 1) < 1e-9 && tr * tr - 4 * det < 0) continue;
          const double disc = tr * tr - 4 * det;
          if (disc >= 0) {
            const double s = std::sqrt(disc);
            if (std::abs(std::abs((tr + s) / 2) - 1) < 1e-9 || std::abs(std::abs((tr - s) / 2) - 1) < 1e-9) continue;
          }
          CHECK(is_expanding(mat(a, b, c, d)) == expanding_numeric(a, b, c, d));
          ++checked;
        }
  CHECK(checked > 5000);
  // boundary cases decided exactly
  CHECK_FALSE(is_expanding(mat(2, 1, 1, 2)));   // eigenvalue 1
  CHECK_FALSE(is_expanding(mat(0, 1, -1, 0)));  // eigenvalues ±i
  CHECK_FALSE(is_expanding(mat(-1, 0, 0, 3)));  // eigenvalue -1
  CHECK(is_expanding(mat(1, 1, -1, 1)));
}

TEST_CASE("classify_det2 examples") {
  auto a1 = classify_det2(mat(0, 2, 1, 0));
  CHECK(a1.similarity_class == SimilarityClass::A1);
  REQUIRE(a1.conjugator.has_value());
  CHECK(*a1.conjugator == IntMatrix::identity(2));
  CHECK(a1.root_of_identity == RootOfIdentity{2, 2});

  auto a3 = classify_det2(mat(1, 1, -1, 1));
  CHECK(a3.similarity_class == SimilarityClass::PlusA3);
  REQUIRE(a3.conjugator.has_value());
  CHECK(*a3.conjugator == IntMatrix::identity(2));
  CHECK(a3.root_of_identity == RootOfIdentity{8, 16});

  // conjugate of the +A4 representative by C = [[1,1],[0,1]]
  const IntMatrix c = mat(1, 1, 0, 1);
  const IntMatrix rep = class_representative(SimilarityClass::PlusA4);
  const IntMatrix conj = inverse_unimodular(c) * rep * c;
  CHECK(conj == mat(1, 2, -1, 0));
  auto a4 = classify_det2(conj);
  CHECK(a4.similarity_class == SimilarityClass::PlusA4);
  REQUIRE(a4.conjugator.has_value());
  CHECK(inverse_unimodular(*a4.conjugator) * rep * *a4.conjugator == conj);

  CHECK(code_of([] { classify_det2(mat(1, 0, 0, 2)); }) == ErrorCode::NotExpanding);
  CHECK(code_of([] { classify_det2(mat(3, 0, 0, 3)); }) == ErrorCode::WrongDeterminant);
}

TEST_CASE("class representatives have their invariants") {
  for (auto c : {SimilarityClass::A1, SimilarityClass::A2, SimilarityClass::PlusA3, SimilarityClass::MinusA3,
                 SimilarityClass::PlusA4, SimilarityClass::MinusA4}) {
    const IntMatrix r = class_representative(c);
    CHECK(is_expanding(r));
    CHECK(class_from_invariants(r.det(), r.trace()) == c);
  }
  CHECK(similarity_class_name(SimilarityClass::MinusA4) == "-A4");
  // det 2, trace 3 has root 1: not an expanding pair
  CHECK_FALSE(class_from_invariants(2, 3).has_value());
}

TEST_CASE("similarity invariance and conjugator soundness") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> u(-3, 3);
  const std::vector<IntMatrix> reps = {mat(0, 2, 1, 0), mat(0, 2, -1, 0), mat(1, 1, -1, 1),
                                       mat(-1, -1, 1, -1), mat(0, 2, -1, 1), mat(0, -2, 1, -1)};
  int done = 0;
  while (done < 200) {
    const IntMatrix c = mat(u(rng), u(rng), u(rng), u(rng));
    if (c.det() != 1 && c.det() != -1) continue;
    const IntMatrix& m = reps[static_cast<std::size_t>(done % 6)];
    const IntMatrix conj = inverse_unimodular(c) * m * c;
    const auto base = classify_det2(m);
    const auto moved = classify_det2(conj);
    CHECK(base.similarity_class == moved.similarity_class);
    CHECK(base.root_of_identity == moved.root_of_identity);
    if (moved.conjugator) {
      const IntMatrix& w = *moved.conjugator;
      CHECK((w.det() == 1 || w.det() == -1));
      CHECK(inverse_unimodular(w) * class_representative(*moved.similarity_class) * w == conj);
    }
    ++done;
  }
}

TEST_CASE("minimal root of identity") {
  CHECK(minimal_root_of_identity(mat(0, 2, 1, 0)) == RootOfIdentity{2, 2});
  CHECK(minimal_root_of_identity(mat(1, 1, -1, 1)) == RootOfIdentity{8, 16});
  CHECK_FALSE(minimal_root_of_identity(mat(2, 1, 1, 2)).has_value());
  CHECK(minimal_root_of_identity(mat(3, 0, 0, 3)) == RootOfIdentity{1, 3});
  CHECK(minimal_root_of_identity(mat(-3, 0, 0, -3)) == RootOfIdentity{2, 9});
  CHECK_FALSE(minimal_root_of_identity(mat(1, 1, -1, 1), 7).has_value());
  const auto m = mat(0, 2, 1, 0);
  CHECK(m * m == IntMatrix::identity(2).scaled(2));
}

TEST_CASE("power table rows") {
  CHECK(verify_theoremE_row(mat(1, 1, -1, 1), 8, 16));
  CHECK(verify_theoremE_row(mat(0, 2, -1, 0), 4, 4));
  CHECK(mat(0, 2, -1, 0).pow(4) == IntMatrix::identity(2).scaled(4));
  CHECK_FALSE(verify_theoremE_row(mat(1, 1, -1, 1), 4, 4));
  CHECK_FALSE(verify_theoremE_row(mat(1, 1, -1, 1), 4, 16));
  CHECK_FALSE(verify_theoremE_row(mat(0, 2, -1, 0), 4, 5));
  CHECK(code_of([] { verify_theoremE_row(mat(1, 1, -1, 1), 5, 32); }) == ErrorCode::BadRow);
  CHECK(code_of([] { verify_theoremE_row(mat(0, 2, 1, 0), 4, 4); }) == ErrorCode::PreconditionViolated);
}

TEST_CASE("power table agrees with brute force on random matrices") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> u(-5, 5);
  int done = 0, with_root = 0;
  while (done < 200) {
    const int a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    const IntMatrix m = mat(a, b, c, d);
    const BigInt det = m.det(), tr = m.trace();
    if (det <= 0 || tr * tr - 4 * det >= 0 || !is_expanding(m)) continue;
    ++done;
    const auto brute = brute_root(a, b, c, d, 24);
    const auto found = minimal_root_of_identity(m, 24);
    REQUIRE(brute.has_value() == found.has_value());
    if (!found) continue;
    ++with_root;
    CHECK(found->l == brute->first);
    CHECK(found->n == brute->second);
    const bool in_table = found->l == 3 || found->l == 4 || found->l == 6 || found->l == 8 || found->l == 12;
    CHECK(in_table);
    if (in_table) CHECK(verify_theoremE_row(m, found->l, found->n));
    CHECK(predicted_root_of_identity(m) == found);
  }
  CHECK(with_root > 0);
}

TEST_CASE("det < 0 rule, exhaustive") {
  CHECK(corollaryD_check(mat(0, 2, 1, 0)));
  CHECK(corollaryD_check(mat(1, 2, 1, -1)));
  CHECK(mat(1, 2, 1, -1).pow(2) == IntMatrix::identity(2).scaled(3));
  CHECK_FALSE(corollaryD_check(mat(1, 3, 1, -2)));
  CHECK(code_of([] { corollaryD_check(mat(1, 1, -1, 1)); }) == ErrorCode::WrongSign);
  int scanned = 0;
  for (int a = -6; a <= 6; ++a)
    for (int b = -6; b <= 6; ++b)
      for (int c = -6; c <= 6; ++c)
        for (int d = -6; d <= 6; ++d) {
          const IntMatrix m = mat(a, b, c, d);
          if (m.det() >= 0 || !is_expanding(m)) continue;
          ++scanned;
          const bool square_scalar = m * m == IntMatrix::identity(2).scaled(-m.det());
          CHECK(square_scalar == (m.trace() == 0));
          CHECK(corollaryD_check(m) == square_scalar);
        }
  CHECK(scanned > 1000);
}

TEST_CASE("companion witnesses") {
  auto w2 = theoremC_witness(2, 4);
  REQUIRE(w2.has_value());
  CHECK(w2->pow(2) == IntMatrix::identity(2).scaled(4));
  auto w4 = theoremC_witness(4, 4);
  REQUIRE(w4.has_value());
  CHECK(*w4 == mat(0, -2, 1, 0));
  CHECK(w4->pow(4) == IntMatrix::identity(2).scaled(4));
  CHECK_FALSE(theoremC_witness(3, 5).has_value());
  CHECK(code_of([] { theoremC_witness(2, 1); }) == ErrorCode::BadParameter);
  // every witness satisfies M^l = n I with distinct, expanding roots
  for (int l = 1; l <= 12; ++l)
    for (std::uint64_t n = 2; n <= 300; ++n) {
      auto w = theoremC_witness(l, n);
      if (!w) continue;
      CHECK(w->pow(static_cast<unsigned>(l)) == IntMatrix::identity(2).scaled(n));
      CHECK(is_expanding(*w));
      CHECK(w->trace() * w->trace() != 4 * w->det());
    }
}

TEST_CASE("factorization checks") {
  const IntMatrix m = mat(0, 2, 1, 0);
  const IntMatrix swap = mat(0, 1, 1, 0);
  CHECK(verify_factorization(m, IntMatrix::identity(2), mat(2, 0, 0, 1), swap));
  CHECK_FALSE(verify_factorization(m, IntMatrix::identity(2), mat(1, 0, 0, 1), swap));
  CHECK(code_of([&] { verify_factorization(m, mat(2, 0, 0, 1), mat(2, 0, 0, 1), swap); }) ==
        ErrorCode::NotUnimodular);
  CHECK(code_of([&] { verify_factorization(m, IntMatrix::identity(2), mat(2, 1, 0, 1), swap); }) ==
        ErrorCode::BadParameter);
  CHECK(code_of([&] { verify_factorization(m, IntMatrix::identity(2), mat(2, 0, 0, 1), mat(1, 1, 0, 0)); }) ==
        ErrorCode::BadParameter);
  // 3-cycle in d = 3: M = D P with P e_j = e_{j+1}
  const IntMatrix d3(3, {2, 0, 0, 0, 1, 0, 0, 0, 1});
  const IntMatrix p3(3, {0, 0, 1, 1, 0, 0, 0, 1, 0});
  CHECK(verify_factorization(d3 * p3, IntMatrix::identity(3), d3, p3));

  // M^2 = ±2I family
  int found = 0;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      for (int c = -3; c <= 3; ++c)
        for (int d = -3; d <= 3; ++d) {
          const IntMatrix x = mat(a, b, c, d);
          const IntMatrix sq = x * x;
          if (!(sq == IntMatrix::identity(2).scaled(2) || sq == IntMatrix::identity(2).scaled(-2))) continue;
          auto f = lemmaG_factorization(x);
          if (!f) continue;
          ++found;
          CHECK(verify_factorization(x, f->a, f->d, f->p));
        }
  CHECK(found > 0);
  CHECK(code_of([] { lemmaG_factorization(mat(1, 1, -1, 1)); }) == ErrorCode::PreconditionViolated);
}

TEST_CASE("trivial equivalence witnesses") {
  auto r = trivially_equivalent(SymMatrix::diagonal({4, 9}), SymMatrix::diagonal({8, 27}), 1.5);
  REQUIRE(r.has_value());
  const auto* re = std::get_if<RationalExponent>(&r->kind);
  REQUIRE(re != nullptr);
  CHECK(re->p == 3);
  CHECK(re->q == 2);
  CHECK(re->bases == std::vector<std::uint64_t>{2, 3});
  CHECK(verify_witness(*r));

  auto r2 = trivially_equivalent(SymMatrix::diagonal({2, 4}), SymMatrix::diagonal({4, 16}), 2.0);
  REQUIRE(r2.has_value());
  const auto* re2 = std::get_if<RationalExponent>(&r2->kind);
  REQUIRE(re2 != nullptr);
  CHECK(re2->p == 2);
  CHECK(re2->q == 1);

  const double t = std::log(3.0) / std::log(2.0);
  auto cb = trivially_equivalent(SymMatrix::diagonal({2, 4}), SymMatrix::diagonal({3, 9}), t);
  REQUIRE(cb.has_value());
  const auto* c = std::get_if<CommonBase>(&cb->kind);
  REQUIRE(c != nullptr);
  CHECK(c->a == 2);
  CHECK(c->b == 3);
  CHECK(c->n == std::vector<int>{1, 2});
  CHECK(c->m == std::vector<int>{1, 2});
  CHECK(c->q == 1);
  CHECK(c->t == doctest::Approx(t).epsilon(1e-15));
  CHECK(verify_witness(*cb));

  // tampered witness fails
  auto bad = *r;
  std::get<RationalExponent>(bad.kind).p = 5;
  CHECK_FALSE(verify_witness(bad));

  CHECK(code_of([] { trivially_equivalent(SymMatrix::diagonal({1.5, 3}), SymMatrix::diagonal({2, 4}), 1); }) ==
        ErrorCode::PreconditionViolated);
  CHECK(code_of([] { trivially_equivalent(SymMatrix::diagonal({2, 4}), SymMatrix::diagonal({2, 8}), 1); }) ==
        ErrorCode::PreconditionViolated);
  CHECK(code_of([] { trivially_equivalent(SymMatrix::diagonal({2, 4}), SymMatrix::diagonal({4, 16}), 3); }) ==
        ErrorCode::PreconditionViolated);
}

TEST_CASE("trivial witnesses re-verify on integer power families") {
  for (std::uint64_t a = 2; a <= 6; ++a)
    for (int k1 = 1; k1 <= 3; ++k1)
      for (int k2 = 1; k2 <= 3; ++k2)
        for (std::uint64_t b = 2; b <= 6; ++b)
          for (int scale = 1; scale <= 2; ++scale) {
            // diag(a^k1, a^k2) vs diag(b^{scale k1}, b^{scale k2})
            auto ipow = [](std::uint64_t x, int e) {
              std::uint64_t v = 1;
              while (e--) v *= x;
              return v;
            };
            const auto a1 = SymMatrix::diagonal({double(ipow(a, k1)), double(ipow(a, k2))});
            const auto a2 = SymMatrix::diagonal({double(ipow(b, scale * k1)), double(ipow(b, scale * k2))});
            const auto v = decide_equivalence(a1, a2);
            REQUIRE(v.equivalent);
            auto w = trivially_equivalent(a1, a2, *v.exponent);
            REQUIRE(w.has_value());
            CHECK(verify_witness(*w));
          }
}

TEST_CASE("MRA report") {
  auto dil = mra_equivalence_report(SymMatrix::scalar(2, 2), SymMatrix::scalar(2, 3));
  CHECK(dil.status == MraStatus::EquivalentTrivially);
  CHECK(dil.lattice_ok);
  REQUIRE(dil.witness.has_value());
  CHECK(verify_witness(*dil.witness));

  auto ne = mra_equivalence_report(SymMatrix::diagonal({2, 4}), SymMatrix::diagonal({2, 8}));
  CHECK(ne.status == MraStatus::NotEquivalent);

  auto tr = mra_equivalence_report(SymMatrix::diagonal({4, 9}), SymMatrix::diagonal({8, 27}));
  CHECK(tr.status == MraStatus::EquivalentTrivially);
  REQUIRE(tr.witness.has_value());
  CHECK(std::holds_alternative<RationalExponent>(tr.witness->kind));

  auto num = mra_equivalence_report(SymMatrix::diagonal({1.5, 2.25}), SymMatrix::diagonal({2.25, 1.5 * 1.5 * 1.5 * 1.5}));
  CHECK(num.status == MraStatus::EquivalentNumericOnly);
  CHECK_FALSE(num.lattice_ok);

  auto bad = mra_equivalence_report(SymMatrix::diagonal({1, 4}), SymMatrix::diagonal({2, 8}));
  CHECK(bad.status == MraStatus::NotEquivalent);
  CHECK(bad.note.find("NotExpansive") != std::string::npos);
}

TEST_CASE("dyadic class") {
  auto d3 = dyadic_class(SymMatrix::scalar(3, 2));
  CHECK(d3.dyadic);
  CHECK(*d3.exponent == doctest::Approx(1.0).epsilon(1e-15));
  auto d33 = dyadic_class(SymMatrix::diagonal({3, 3}));
  CHECK(d33.dyadic);
  CHECK(*d33.exponent == doctest::Approx(std::log(3.0) / std::log(2.0)).epsilon(1e-15));
  CHECK_FALSE(dyadic_class(SymMatrix::diagonal({2, 4})).dyadic);
  // eigenvalues ±2 absolutize to 2I
  auto flip = dyadic_class(SymMatrix::from_rows({{0, 2}, {2, 0}}));
  CHECK(flip.dyadic);
  CHECK(flip.certification == Certification::ExactInteger);
  CHECK(*flip.scale == 2.0);
  CHECK(dyadic_class(SymMatrix::diagonal({-2.5, 2.5})).dyadic);
  CHECK(code_of([] { dyadic_class(SymMatrix::diagonal({1, 3})); }) == ErrorCode::NotExpansive);
}
