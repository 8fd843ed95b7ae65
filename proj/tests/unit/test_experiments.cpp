#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../oracles.hpp"
#include "lfp/errors.hpp"
#include "lfp/experiments.hpp"

using namespace lfp;

TEST_CASE("mse_function matches quadrature") {
  const CoefficientVector a({1.0, 0.5, -0.3, 0.2});
  const CoefficientVector b({0.8, 0.0, 0.1});
  const double quad = oracle::trapezoid([&](double x) {
    const double d = oracle::series({1.0, 0.5, -0.3, 0.2}, x) - oracle::series({0.8, 0.0, 0.1}, x);
    return d * d;
  });
  CHECK(mse_function(a, b) == doctest::Approx(quad).epsilon(1e-8));
  CHECK(mse_function(a, a) == 0.0);
}

TEST_CASE("boundary thetas lie on the ellipsoid boundary") {
  const EllipsoidSpec spec(1.5, 4.0);
  const auto thetas = boundary_thetas(spec, 32, 40, 3);
  CHECK(thetas.size() >= 40);
  for (const auto& t : thetas) {
    CHECK(t.size() == 65);
    CHECK(spec.energy(t.coeffs()) == doctest::Approx(16.0).epsilon(1e-10));
  }
  CHECK(boundary_thetas(spec, 32, 40, 3).size() == thetas.size());
}

TEST_CASE("Pinsker risk curve") {
  const EllipsoidSpec spec(1.0, 1.0);
  const std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
  RiskCurveOptions opts;
  opts.T = 32;
  opts.thetas = 20;
  const auto curve = risk_curve_pinsker(spec, eps, 200, 5, opts);
  REQUIRE(curve.points.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& p = curve.points[i];
    CHECK(p.abscissa == eps[i]);
    CHECK(p.mse > 0.0);
    // Pinsker beats keeping all 65 noisy coordinates.
    CHECK(p.mse < 65 * eps[i] * eps[i]);
    if (i > 0) CHECK(p.mse < curve.points[i - 1].mse);
  }
  const double slope = curve.log_log_slope();
  CHECK(slope > 0.8);
  CHECK(slope < 2.0);
  CHECK_THROWS_AS((void)risk_curve_pinsker(spec, std::vector<double>{0.1, 0.2}, 200, 5, opts),
                  ValidationError);
  CHECK_THROWS_AS((void)risk_curve_pinsker(spec, eps, 50, 5, opts), ValidationError);
}

TEST_CASE("BJS adaptivity ratio") {
  const std::vector<EllipsoidSpec> specs{EllipsoidSpec(1.0, 1.0), EllipsoidSpec(2.0, 2.0),
                                         EllipsoidSpec(1.0, 1.0)};
  AdaptivityOptions opts;
  opts.thetas = 8;
  const auto rows = adaptivity_ratio_bjs(specs, 0.05, 100, 9, opts);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.bjs_risk > 0);
    CHECK(r.pinsker_risk > 0);
    CHECK(r.ratio == doctest::Approx(r.bjs_risk / r.pinsker_risk));
    CHECK(r.ratio > 1.0 - 3 * r.ratio_se - 0.05);
  }
  CHECK(rows[0].bjs_risk == rows[2].bjs_risk);
  CHECK(rows[0].pinsker_risk == rows[2].pinsker_risk);
}

TEST_CASE("consistency experiment") {
  const auto model = make_class_model(3, EllipsoidSpec(2.0, 5.0), 3, 0.3, 0.05, 4);
  const std::vector<std::size_t> Ns{64, 256};
  SUBCASE("near-noiseless data decodes perfectly") {
    const auto rows = consistency_experiment(model, Ns, 10, 1, NoiseModel{1e-6});
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
      CHECK(r.worst_class_error == 0.0);
      CHECK(r.class_errors.size() == 3);
      CHECK(r.bound_term == doctest::Approx(r.sup_mse / 0.09));
    }
  }
  SUBCASE("estimation error falls with N") {
    const auto rows = consistency_experiment(model, Ns, 30, 2, NoiseModel{1.0});
    CHECK(rows[1].sup_mse < rows[0].sup_mse);
  }
  CHECK_THROWS_AS((void)consistency_experiment(model, std::vector<std::size_t>{256, 64}, 10, 1),
                  ValidationError);
}

TEST_CASE("phase ablation") {
  const EllipsoidSpec spec(2.0, 10.0);
  PipelineConfig config;
  config.N = 128;
  config.T = 5;
  config.P = 0;
  SUBCASE("phase-coded classes lose accuracy without phase") {
    const auto model = make_phase_class_model(4, spec, 5, 0.01, 6);
    const auto ds = generate_dataset(model, 15, 1, 128, 5, NoiseModel{1.0}, 7);
    const auto r = phase_ablation(ds, config, CvScheme::k_fold(5), 3);
    CHECK(r.full.overall_accuracy() > 0.9);
    CHECK(r.magnitude_only.overall_accuracy() < 0.5);
    CHECK(r.paired_difference ==
          doctest::Approx(r.full.overall_accuracy() - r.magnitude_only.overall_accuracy()));
    CHECK(r.magnitude_only.config.magnitude_only);
  }
  SUBCASE("magnitude-coded classes keep accuracy") {
    const auto model = make_magnitude_class_model(4, spec, 5, 0.01, 6);
    const auto ds = generate_dataset(model, 15, 1, 128, 5, NoiseModel{0.25}, 7);
    const auto r = phase_ablation(ds, config, CvScheme::k_fold(5), 3);
    CHECK(r.magnitude_only.overall_accuracy() > 0.8);
  }
}
