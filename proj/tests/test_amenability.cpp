#include "doctest.h"

#include <cmath>

#include "qlattice/amenability.hpp"

using namespace qlat;

namespace {

Backend z_backend() {
  return make_dual_group_backend(GroupSpec::free_abelian(1), {{1}});
}
Backend z2_backend() {
  return make_dual_group_backend(GroupSpec::free_abelian(2), {{1, 0}, {0, 1}});
}
Backend f2_backend() {
  return make_dual_group_backend(GroupSpec::free_group(2), {{1}, {2}});
}
std::vector<std::vector<int>> s3_table() {
  return {{0, 1, 2, 3, 4, 5}, {1, 2, 0, 5, 3, 4}, {2, 0, 1, 4, 5, 3},
          {3, 4, 5, 0, 1, 2}, {4, 5, 3, 2, 0, 1}, {5, 3, 4, 1, 2, 0}};
}
std::vector<Mat> s3_rep() {
  double c = -0.5, s = std::sqrt(3.0) / 2.0;
  auto m = [](double a, double b, double c2, double d) {
    Mat r(2, 2);
    r << a, b, c2, d;
    return r;
  };
  return {m(1, 0, 0, 1),  m(c, -s, s, c),  m(c, s, -s, c),
          m(1, 0, 0, -1), m(c, -s, -s, -c), m(c, s, s, -c)};
}
Backend s3_backend() { return make_finite_group_backend(s3_table(), s3_rep()); }
Backend span_q1() { return make_span_q_backend(Mat::Identity(2, 2)); }
Backend span_q12() {
  Mat q = Mat::Zero(2, 2);
  q(0, 0) = 1.2;
  q(1, 1) = 1.0 / 1.2;
  return make_span_q_backend(q);
}

}  // namespace

TEST_CASE("amenability: walk numerators are frozen integers") {
  // Z: central binomial coefficients C(2k, k)
  CHECK(rechi_numerators(z_backend(), 12) ==
        std::vector<count_t>{1, 0, 2, 0, 6, 0, 20, 0, 70, 0, 252, 0, 924});
  // Z^2: products C(2k, k)^2
  CHECK(rechi_numerators(z2_backend(), 12) ==
        std::vector<count_t>{1, 0, 4, 0, 36, 0, 400, 0, 4900, 0, 63504, 0,
                             853776});
  // F_2: closed walks on the 4-regular tree
  CHECK(rechi_numerators(f2_backend(), 12) ==
        std::vector<count_t>{1, 0, 4, 0, 28, 0, 232, 0, 2092, 0, 19864, 0,
                             195352});
  // S_3: (1/6) sum over the group of (2 Re chi)^k
  CHECK(rechi_numerators(s3_backend(), 12) ==
        std::vector<count_t>{1, 0, 4, 8, 48, 160, 704, 2688, 11008, 43520,
                             175104, 698368, 2797568});
  // span at Q = id: sums of noncrossing pairing counts, 2^k Cat_k on evens
  CHECK(rechi_numerators(span_q1(), 10) ==
        std::vector<count_t>{1, 0, 2, 0, 8, 0, 40, 0, 224, 0, 1344});
}

TEST_CASE("amenability: moments divide the numerators by 2^k") {
  std::vector<double> m = rechi_moments(z2_backend(), 6);
  REQUIRE(m.size() == 7);
  CHECK(m[0] == doctest::Approx(1.0));
  CHECK(m[2] == doctest::Approx(1.0));       // 4 / 4
  CHECK(m[4] == doctest::Approx(36.0 / 16.0));
  CHECK(m[6] == doctest::Approx(400.0 / 64.0));
}

TEST_CASE("amenability: exact root monotonicity") {
  CHECK(roots_monotone_exact({1, 4, 16}));       // equality everywhere
  CHECK(roots_monotone_exact({1, 4, 36, 400}));  // genuine growth
  CHECK(!roots_monotone_exact({1, 4, 10}));      // 4^2 > 10 breaks it
  // the cross products (3e12)^3 vs (6e18)^2 overflow 64 bits, so this
  // only comes out right through the exact big-integer path
  std::vector<count_t> big = {1, 1000000LL, 3000000000000LL, 6000000000000000000LL};
  CHECK(roots_monotone_exact(big));
  std::vector<count_t> big_bad = {1, 1000000LL, 3000000000000LL, 2000000000000000000LL};
  CHECK(!roots_monotone_exact(big_bad));
}

TEST_CASE("amenability: a geometric sequence is extrapolated exactly") {
  double rho = 1.5;
  std::vector<double> m(13);
  for (int k = 0; k <= 12; ++k) m[k] = std::pow(rho, k);
  SpectralEstimate est = spectral_radius_estimate(m, 12);
  CHECK(est.extrapolated == doctest::Approx(rho).epsilon(1e-6));
  REQUIRE(!est.lower_bounds.empty());
  for (double l : est.lower_bounds) CHECK(l == doctest::Approx(rho).epsilon(1e-9));
}

TEST_CASE("amenability: Kesten verdicts for the reference duals") {
  SpectralEstimate z2 = kesten_test(z2_backend(), 12);
  CHECK(z2.verdict == Verdict::amenable);
  CHECK(z2.ceiling == doctest::Approx(2.0));
  CHECK(std::abs(z2.extrapolated - 2.0) < 0.1);
  CHECK(z2.monotone_exact);

  SpectralEstimate f2 = kesten_test(f2_backend(), 12);
  CHECK(f2.verdict == Verdict::non_amenable);
  CHECK(std::abs(f2.extrapolated - std::sqrt(3.0)) < 0.05 * std::sqrt(3.0));
  CHECK(f2.monotone_exact);

  SpectralEstimate z = kesten_test(z_backend(), 12);
  CHECK(z.verdict == Verdict::amenable);
  CHECK(std::abs(z.extrapolated - 1.0) < 0.05);

  SpectralEstimate s3 = kesten_test(s3_backend(), 12);
  CHECK(s3.verdict == Verdict::amenable);
  CHECK(std::abs(s3.extrapolated - 2.0) < 0.1);
}

TEST_CASE("amenability: Kesten lower bounds stay below the ceiling") {
  for (Backend b : {z_backend(), z2_backend(), f2_backend(), s3_backend()}) {
    SpectralEstimate est = kesten_test(b, 12);
    REQUIRE(!est.lower_bounds.empty());
    for (std::size_t k = 1; k < est.lower_bounds.size(); ++k)
      CHECK(est.lower_bounds[k] >= est.lower_bounds[k - 1] - 1e-12);
    CHECK(est.lower_bounds.back() <= est.ceiling + 1e-9);
  }
}

TEST_CASE("amenability: span at Q = id is Kesten-non-amenable") {
  // the even numerators grow like 2^k Cat_k, so the norm is 2 sqrt(2) / 2;
  // the k^{-3/2} Catalan correction converges slowly, so allow a 5% margin
  SpectralEstimate est = kesten_test(span_q1(), 10, 0.05);
  CHECK(est.verdict == Verdict::non_amenable);
  CHECK(std::abs(est.extrapolated - std::sqrt(2.0)) < 0.05 * std::sqrt(2.0));
}

TEST_CASE("amenability: lattice test on tracial backends") {
  LatticeAmenability s3 = lattice_amenability_test(s3_backend(), 12);
  CHECK(s3.trace_flag);
  CHECK(s3.index == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(s3.index_is_square);
  CHECK(s3.estimate.verdict == Verdict::amenable);
  CHECK(std::abs(s3.estimate.extrapolated - 4.0) < 0.2);

  LatticeAmenability f2 = lattice_amenability_test(f2_backend(), 12);
  CHECK(f2.trace_flag);
  CHECK(f2.index == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(f2.estimate.verdict == Verdict::amenable);
  CHECK(std::abs(f2.estimate.extrapolated - 4.0) < 0.2);

  LatticeAmenability z2 = lattice_amenability_test(z2_backend(), 12);
  CHECK(z2.estimate.verdict == Verdict::amenable);
}

TEST_CASE("amenability: deformed span fails the trace criterion") {
  LatticeAmenability la = lattice_amenability_test(span_q12(), 12);
  CHECK(!la.trace_flag);
  CHECK(la.estimate.verdict == Verdict::non_amenable);
  // index = d^2 with d = 1.2^2 + 1.2^-2 = 1921/900
  CHECK(la.index == doctest::Approx(4.555853086419753).epsilon(1e-9));
  CHECK(!la.index_is_square);
  // the character growth stays near 4 while the index exceeds 4.55
  CHECK(la.estimate.extrapolated < 4.2);
  CHECK((la.index - la.estimate.extrapolated) / la.index > 0.08);
}

TEST_CASE("amenability: undeformed span keeps the verdict open at low order") {
  // moments Cat_k approach index 4 only like 4^k k^{-3/2}; at the span cap
  // the fitted growth sits between the two decision thresholds
  LatticeAmenability la = lattice_amenability_test(span_q1(), 12);
  CHECK(la.trace_flag);
  CHECK(la.index == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(la.estimate.verdict != Verdict::non_amenable);
  CHECK(la.estimate.extrapolated > 3.2);
  CHECK(la.estimate.extrapolated <= 4.05);
}

TEST_CASE("amenability: configuration guards") {
  CHECK_THROWS_AS(kesten_test(z2_backend(), 12, 0.0), config_error);
  CHECK_THROWS_AS(lattice_amenability_test(z2_backend(), 12, 0.7), config_error);
  CHECK(verdict_name(Verdict::amenable) == "amenable");
  CHECK(verdict_name(Verdict::non_amenable) == "non_amenable");
  CHECK(verdict_name(Verdict::inconclusive) == "inconclusive");
}
