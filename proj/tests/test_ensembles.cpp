#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "riceband/ensembles.hpp"
#include "riceband/linalg.hpp"
#include "riceband/rng.hpp"

using namespace riceband;

namespace {

SpectralMeasure two_point_measure() {
  SpectralMeasure nu;
  nu.dim = 1;
  nu.atom_points = {1.0, -1.0};
  nu.atom_weights = {0.5, 0.5};
  return nu;
}

}  // namespace

TEST_CASE("root density of random polynomials") {
  // at t = 0: A=1, B=0, C=1 -> density 1/pi
  for (int n : {1, 3, 10}) {
    CHECK(kac_density(0.0, n) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-14));
  }
  // at t = 1 the discriminant is n(n+2)/12
  for (int n : {1, 2, 7}) {
    const double expected = std::sqrt(n * (n + 2.0) / 12.0) / std::numbers::pi;
    CHECK(kac_density(1.0, n) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("density reflection rho(t) = rho(1/t)/t^2") {
  for (int n : {2, 5, 12}) {
    for (double t : {2.0, 3.7, 10.0}) {
      CHECK(kac_density(t, n) == doctest::Approx(kac_density(1.0 / t, n) / (t * t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("expected root counts") {
  CHECK(kac_expected_roots(1) == doctest::Approx(1.0).epsilon(1e-9));
  // whole line splits evenly between [-1,1] and its complement
  for (int n : {3, 8}) {
    const double whole = kac_expected_roots(n);
    const double inner = kac_expected_roots(n, std::make_pair(-1.0, 1.0));
    CHECK(whole == doctest::Approx(2.0 * inner).epsilon(1e-10));
  }
  CHECK_THROWS(kac_expected_roots(0));
  CHECK_THROWS(kac_expected_roots(2, std::make_pair(1.0, -1.0)));
}

TEST_CASE("gradient covariance of the degree-1 monomial basis") {
  // h = (1, t): Sigma_11 = 1/(1+t^2)^2
  const LinearFieldModel model = LinearFieldModel::monomial_product(1, 1);
  const MomentField field = moment_field_linear(model);
  for (double t : {-1.3, 0.0, 0.4, 2.0}) {
    const double x[] = {t};
    double out[1];
    field.sigma_matrix(x, out);
    CHECK(out[0] == doctest::Approx(1.0 / std::pow(1.0 + t * t, 2)).epsilon(1e-12));
    CHECK(field.sigma(x) == doctest::Approx(std::sqrt(1.0 + t * t)).epsilon(1e-12));
  }
}

TEST_CASE("explicit identity covariance matches the default path") {
  LinearFieldModel with_lambda = LinearFieldModel::monomial_product(2, 2);
  with_lambda.set_lambda_diag(std::vector<double>(static_cast<std::size_t>(with_lambda.basis_size()), 1.0));
  const LinearFieldModel plain = LinearFieldModel::monomial_product(2, 2);
  const MomentField a = moment_field_linear(with_lambda);
  const MomentField b = moment_field_linear(plain);
  const double x[] = {0.3, -0.8};
  double ma[4], mb[4];
  a.sigma_matrix(x, ma);
  b.sigma_matrix(x, mb);
  for (int i = 0; i < 4; ++i) CHECK(ma[i] == doctest::Approx(mb[i]).epsilon(1e-10));
}

TEST_CASE("monomial product fields have diagonal gradient covariance") {
  const int n = 3;
  const MomentField field = moment_field_linear(LinearFieldModel::monomial_product(2, n));
  for (double t : {0.2, -0.7}) {
    const double x[] = {t, 2.0 * t};
    double m[4];
    field.sigma_matrix(x, m);
    CHECK(m[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(m[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(m[0] == doctest::Approx(kac_delta(x[0], n)).epsilon(1e-10));
    CHECK(m[3] == doctest::Approx(kac_delta(x[1], n)).epsilon(1e-10));
  }
}

TEST_CASE("Kostlan gradient covariance matches the closed form") {
  // Sigma = n [(1+|x|^2) I - x x^T] / (1+|x|^2)^2
  const int n = 3, d = 2;
  const MomentField field = moment_field_linear(LinearFieldModel::kostlan(d, n));
  const double x[] = {0.6, -1.1};
  const double r2 = x[0] * x[0] + x[1] * x[1];
  double m[4];
  field.sigma_matrix(x, m);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double expected =
          n * ((i == j ? 1.0 + r2 : 0.0) - x[i] * x[j]) / std::pow(1.0 + r2, 2);
      CHECK(m[i * d + j] == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("closed forms collapse correctly in one dimension") {
  const SphereRule rule1 = build_sphere_rule(1, 2);
  // sqrt(n) law on the whole line
  for (int n : {1, 4, 9, 100}) {
    CHECK(kostlan_expected_area(n, 1, nullptr, rule1, {}) ==
          doctest::Approx(std::sqrt(static_cast<double>(n))).epsilon(1e-12));
  }
  // trigonometric: (1/pi) |F| sqrt(n(2n+1)/6)
  const DomainBox period({0.0}, {2.0 * std::numbers::pi});
  for (int n : {1, 2, 5}) {
    const double expected = 2.0 * std::sqrt(n * (2.0 * n + 1.0) / 6.0);
    CHECK(trig_expected_area(n, 1, period, rule1) == doctest::Approx(expected).epsilon(1e-12));
  }
  // two-point spectral measure: 2 exp(-u^2/2) on one period
  for (double u : {0.0, 0.5, 1.0}) {
    CHECK(homogeneous_expected_area(two_point_measure(), u, period, rule1) ==
          doctest::Approx(2.0 * std::exp(-0.5 * u * u)).epsilon(1e-12));
  }
}

TEST_CASE("sqrt(n) scaling is exact on any box") {
  const SphereRule rule = build_sphere_rule(2, 64);
  const DomainBox box({-1.0, -0.5}, {2.0, 1.5});
  for (int n : {1, 3, 10}) {
    const double v1 = kostlan_expected_area(n, 2, &box, rule, {});
    const double v4 = kostlan_expected_area(4 * n, 2, &box, rule, {});
    CHECK(v4 / v1 == 2.0);  // exact in floating point
  }
}

TEST_CASE("gamma bounds collapse to equality for the two-point measure") {
  const DomainBox period({0.0}, {2.0 * std::numbers::pi});
  const auto [lo, hi] = gamma_bounds(two_point_measure(), 0.5, period);
  const double exact = 2.0 * std::exp(-0.5 * 0.25);
  CHECK(lo == doctest::Approx(exact).epsilon(1e-12));
  CHECK(hi == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("spectral measures validate symmetry and mass") {
  SpectralMeasure lopsided;
  lopsided.dim = 1;
  lopsided.atom_points = {1.0};
  lopsided.atom_weights = {1.0};
  CHECK(!lopsided.is_symmetric());
  CHECK_THROWS(make_spectral_ensemble(lopsided));

  SpectralMeasure heavy = two_point_measure();
  heavy.atom_weights = {1.0, 1.0};
  CHECK(heavy.is_symmetric());
  CHECK(!heavy.is_unit_variance());
  CHECK_THROWS(make_spectral_ensemble(heavy));
}

TEST_CASE("descriptors round-trip through JSON") {
  const Ensemble kostlan = make_ensemble(EnsembleKind::Kostlan, 2, 3);
  const nlohmann::json j = ensemble_to_json(kostlan);
  const Ensemble back = ensemble_from_json(j);
  CHECK(back.kind == kostlan.kind);
  CHECK(back.dim == 2);
  CHECK(back.degree == 3);
  CHECK(ensemble_to_json(back) == j);

  const Ensemble spectral = make_spectral_ensemble(two_point_measure(), 0.5);
  const Ensemble sback = ensemble_from_json(ensemble_to_json(spectral));
  CHECK(sback.level == 0.5);
  CHECK(sback.measure->n_atoms() == 2);

  nlohmann::json bad = j;
  bad["extra"] = 1;
  CHECK_THROWS(ensemble_from_json(bad));
  nlohmann::json nokind = j;
  nokind.erase("kind");
  CHECK_THROWS(ensemble_from_json(nokind));
}

TEST_CASE("coefficient sampling is deterministic per seed") {
  const Ensemble e = make_ensemble(EnsembleKind::Kostlan, 1, 2);
  CHECK(sample_coefficients(e, 5) == sample_coefficients(e, 5));
  CHECK(sample_coefficients(e, 5) != sample_coefficients(e, 6));
}

TEST_CASE("coefficient variances follow the diagonal covariance") {
  // Kostlan d=1 n=2: variances (1, 2, 1)
  const Ensemble e = make_ensemble(EnsembleKind::Kostlan, 1, 2);
  const int reps = 20000;
  std::vector<double> sq(3, 0.0);
  for (int r = 0; r < reps; ++r) {
    const auto c = sample_coefficients(e, static_cast<std::uint64_t>(r));
    for (int k = 0; k < 3; ++k) sq[static_cast<std::size_t>(k)] += c[static_cast<std::size_t>(k)] * c[static_cast<std::size_t>(k)];
  }
  const double expected[] = {1.0, 2.0, 1.0};
  for (int k = 0; k < 3; ++k) {
    const double var = sq[static_cast<std::size_t>(k)] / reps;
    // variance of the variance estimator is 2 lambda^2 / reps
    const double se = expected[k] * std::sqrt(2.0 / reps);
    CHECK(std::abs(var - expected[k]) <= 4.0 * se);
  }
}

TEST_CASE("realized fields have correct analytic gradients") {
  const double probe[] = {0.37, -0.81};
  for (EnsembleKind kind :
       {EnsembleKind::MonomialProduct, EnsembleKind::Kostlan, EnsembleKind::Trigonometric}) {
    const Ensemble e = make_ensemble(kind, 2, 3);
    const ScalarField f = realize_field(e, sample_coefficients(e, 99));
    double grad[2];
    const double v = f(probe, grad);
    const double h = 1e-6;
    for (int i = 0; i < 2; ++i) {
      double xp[] = {probe[0], probe[1]};
      xp[i] += h;
      const double fp = f(xp, {});
      xp[i] -= 2.0 * h;
      const double fm = f(xp, {});
      CHECK(grad[i] == doctest::Approx((fp - fm) / (2.0 * h)).epsilon(1e-5));
    }
    (void)v;
  }

  const Ensemble spectral = make_spectral_ensemble(two_point_measure(), 0.3);
  const ScalarField f = realize_field(spectral, sample_coefficients(spectral, 4));
  const double x1[] = {1.234};
  double g1[1];
  const double v = f(x1, g1);
  const double h = 1e-6;
  const double xp[] = {1.234 + h}, xm[] = {1.234 - h};
  CHECK(g1[0] == doctest::Approx((f(xp, {}) - f(xm, {})) / (2.0 * h)).epsilon(1e-5));
  (void)v;
}

TEST_CASE("basis values reproduce the realized field") {
  for (const Ensemble& e : {make_ensemble(EnsembleKind::Trigonometric, 2, 2),
                            make_spectral_ensemble(two_point_measure(), 0.4)}) {
    const auto coeffs = sample_coefficients(e, 17);
    const ScalarField f = realize_field(e, coeffs);
    const std::vector<double> x = {0.9, -0.2};
    std::vector<double> basis(static_cast<std::size_t>(e.n_coefficients()));
    ensemble_basis_values(e, std::span<const double>(x.data(), static_cast<std::size_t>(e.dim)), basis);
    const double direct = dot(basis, coeffs) - (e.kind == EnsembleKind::Spectral ? e.level : 0.0);
    CHECK(f(std::span<const double>(x.data(), static_cast<std::size_t>(e.dim)), {}) ==
          doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("theory dispatch covers the catalog") {
  const SphereRule rule1 = build_sphere_rule(1, 2);
  const DomainBox line({-1.0}, {1.0});
  const Ensemble kac = make_ensemble(EnsembleKind::Kac, 1, 4);
  CHECK(theory_expected_area(kac, line, rule1, {}) ==
        doctest::Approx(kac_expected_roots(4, std::make_pair(-1.0, 1.0))).epsilon(1e-10));

  // monomial product with d=1 equals the Kac count
  const Ensemble mono = make_ensemble(EnsembleKind::MonomialProduct, 1, 4);
  CHECK(theory_expected_area(mono, line, rule1, {}) ==
        doctest::Approx(kac_expected_roots(4, std::make_pair(-1.0, 1.0))).epsilon(1e-6));
}
