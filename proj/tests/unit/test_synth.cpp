#include <doctest.h>

#include <cmath>
#include <map>

#include "lfp/errors.hpp"
#include "lfp/synth.hpp"

using namespace lfp;

TEST_CASE("sample_sobolev stays in the ellipsoid") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (double C : {0.1, 1.0, 10.0}) {
      const EllipsoidSpec spec(alpha, C);
      for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto theta = sample_sobolev(spec, 7, seed);
        CHECK(theta.size() == 15);
        const double e = spec.energy(theta.coeffs());
        CHECK(e <= C * C * (1 + 1e-12));
        CHECK(e >= 0.2 * C * C * (1 - 1e-12));
      }
    }
  }
}

TEST_CASE("sample_sobolev is deterministic and shrinks with C") {
  const EllipsoidSpec spec(2.0, 10.0);
  CHECK(sample_sobolev(spec, 5, 42) == sample_sobolev(spec, 5, 42));
  CHECK_FALSE(sample_sobolev(spec, 5, 42) == sample_sobolev(spec, 5, 43));
  const auto tiny = sample_sobolev(EllipsoidSpec(2.0, 1e-9), 5, 42);
  for (std::size_t k = 2; k <= tiny.size(); ++k) CHECK(std::abs(tiny.at(k)) < 1e-9);
}

TEST_CASE("make_class_model separation") {
  const EllipsoidSpec spec(2.0, 10.0);
  const auto model = make_class_model(8, spec, 5, 0.5, 0.1, 7);
  CHECK(model.num_classes() == 8);
  CHECK(model.min_prototype_distance() > 2 * 0.5 + 2 * 0.1);
  for (const auto& p : model.prototypes()) CHECK(spec.contains(p.coeffs(), 1e-12));
  CHECK(make_class_model(8, spec, 5, 0.5, 0.1, 7).prototypes() == model.prototypes());
  // Separation far beyond the ellipsoid diameter is impossible.
  CHECK_THROWS_AS((void)make_class_model(4, spec, 5, 1e3, 0.1, 7, 200), ValidationError);
  CHECK_THROWS_AS((void)make_class_model(1, spec, 5, 0.5, 0.1, 7), ValidationError);
  CHECK_THROWS_AS((void)make_class_model(3, spec, 5, 0.5, 0.3, 7), ValidationError);
}

TEST_CASE("within-class draws stay in their class and the ellipsoid") {
  const EllipsoidSpec spec(1.0, 3.0);
  const auto model = make_class_model(4, spec, 4, 0.4, 0.15, 11);
  Rng rng(1);
  for (std::size_t label = 1; label <= 4; ++label) {
    for (int r = 0; r < 200; ++r) {
      const auto f = perturb_within_class(model, label, rng);
      CHECK(model.distance_to_class(f.coeffs(), label) <= 1e-12);
      CHECK(spec.contains(f.coeffs(), 1e-10));
      for (std::size_t other = 1; other <= 4; ++other) {
        if (other != label) CHECK(model.distance_to_class(f.coeffs(), other) > 2 * 0.4);
      }
    }
  }
}

TEST_CASE("phase and magnitude class models") {
  const EllipsoidSpec spec(2.0, 10.0);
  const auto phase = make_phase_class_model(4, spec, 5, 0.01, 3);
  const auto mag = make_magnitude_class_model(4, spec, 5, 0.01, 3);
  for (const auto* m : {&phase, &mag}) {
    CHECK(m->num_classes() == 4);
    CHECK(m->min_prototype_distance() > 2 * m->separation() + 2 * m->within_spread());
  }
  // Phase classes share each harmonic's magnitude.
  for (std::size_t h = 1; h <= 5; ++h) {
    const auto mag_of = [h](const CoefficientVector& p) {
      return std::hypot(p.at(2 * h), p.at(2 * h + 1));
    };
    for (std::size_t k = 2; k <= 4; ++k) {
      CHECK(mag_of(phase.prototype(k)) == doctest::Approx(mag_of(phase.prototype(1))));
    }
  }
  CHECK(phase.prototype(2).at(1) == phase.prototype(1).at(1));
  CHECK(mag.prototype(2).at(1) == mag.prototype(1).at(1));
}

TEST_CASE("trial noise has the configured mean and variance") {
  const EllipsoidSpec spec(2.0, 10.0);
  const auto model = make_class_model(2, spec, 5, 0.3, 1e-9, 5);
  const std::size_t N = 200;
  for (double sigma : {0.5, 2.0}) {
    const auto f = reconstruct(model.prototype(1), N);
    double sum = 0.0;
    double sum2 = 0.0;
    std::size_t count = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const auto trial = generate_trial(model, 1, 1, N, NoiseModel{sigma}, seed);
      REQUIRE(trial.label == 1);
      for (std::size_t l = 0; l < N; ++l) {
        const double r = trial.channels[0][l] - f[l];
        sum += r;
        sum2 += r * r;
        ++count;
      }
    }
    const double mean = sum / static_cast<double>(count);
    const double var = sum2 / static_cast<double>(count) - mean * mean;
    CHECK(std::abs(mean) < 4 * sigma / std::sqrt(static_cast<double>(count)));
    CHECK(std::abs(var / (sigma * sigma) - 1.0) < 0.05);
  }
  CHECK_THROWS_AS(NoiseModel{0.0}.validate(), ValidationError);
}

TEST_CASE("trials are deterministic per seed") {
  const auto model = make_class_model(3, EllipsoidSpec(1.0, 2.0), 3, 0.2, 0.05, 9);
  const auto a = generate_trial(model, 2, 3, 64, NoiseModel{}, 123);
  const auto b = generate_trial(model, 2, 3, 64, NoiseModel{}, 123);
  const auto c = generate_trial(model, 2, 3, 64, NoiseModel{}, 124);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(a.channels.size() == 3);
  CHECK_FALSE(a.channels[0] == a.channels[1]);
}

TEST_CASE("generate_dataset layout") {
  const auto model = make_class_model(3, EllipsoidSpec(1.0, 2.0), 3, 0.2, 0.05, 9);
  const auto ds = generate_dataset(model, 10, 2, 64, 5, NoiseModel{}, 77);
  ds.validate();
  CHECK(ds.trials.size() == 30);
  CHECK(ds.num_sessions() == 5);
  std::map<std::size_t, int> per_label;
  std::map<std::size_t, int> per_session;
  for (const auto& t : ds.trials) {
    ++per_label[t.label];
    ++per_session[t.session];
    CHECK(t.channels.size() == 2);
    CHECK(t.channels[0].size() == 64);
  }
  for (const auto& [label, n] : per_label) CHECK(n == 10);
  for (const auto& [session, n] : per_session) CHECK(n == 6);
  CHECK(ds == generate_dataset(model, 10, 2, 64, 5, NoiseModel{}, 77));
  const auto direct = generate_trial(model, 1, 2, 64, NoiseModel{}, derive_seed(77, {4}));
  CHECK(ds.trials[4].channels == direct.channels);
  CHECK(ds.trials[4].session == 5);
}

TEST_CASE("normal variates have Gaussian moments") {
  Rng rng(2024);
  const int n = 1000000;
  double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
  std::vector<double> x(n);
  for (double& v : x) {
    v = rng.normal();
    m1 += v;
  }
  m1 /= n;
  for (double v : x) {
    const double d = v - m1;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  CHECK(std::abs(m1) < 0.005);
  CHECK(std::abs(m2 - 1.0) < 0.01);
  CHECK(std::abs(m3 / std::pow(m2, 1.5)) < 0.05);
  CHECK(std::abs(m4 / (m2 * m2) - 3.0) < 0.1);
}

TEST_CASE("derive_seed and uniform") {
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
  Rng rng(8);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    CHECK(rng.below(7) < 7);
  }
}
