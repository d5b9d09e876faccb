#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cdf2pdf/distributions.hpp"
#include "cdf2pdf/errors.hpp"
#include "cdf2pdf/rng.hpp"
#include "oracles.hpp"

using namespace cdf2pdf;

namespace {

MixtureSpec single(Component c) {
  MixtureSpec s;
  s.components.push_back({1.0, c});
  return s;
}

std::vector<double> uniform_edges(const MixtureSpec& spec) {
  std::vector<double> edges;
  for (const auto& [w, c] : spec.components)
    if (c.kind == Component::Kind::Uniform) {
      edges.push_back(c.a);
      edges.push_back(c.b);
    }
  return edges;
}

} // namespace

TEST_CASE("pdf_true point values") {
  CHECK(pdf_true(single(Component::normal(0, 1)), 0.0) ==
        doctest::Approx(0.3989422804014327).epsilon(1e-12));
  CHECK(pdf_true(single(Component::uniform(1, 3)), 2.0) == 0.5);
  // Frozen from a high-precision evaluation of the mixture formula.
  CHECK(pdf_true(bart_simpson(), 0.0) ==
        doctest::Approx(0.5984163940411785).epsilon(1e-12));
}

TEST_CASE("cdf_true point values") {
  CHECK(cdf_true(single(Component::uniform(-1, 1)), 0.0) == 0.5);
  CHECK(cdf_true(single(Component::normal(0, 1)), 0.0) ==
        doctest::Approx(0.5).epsilon(1e-14));

  // g is symmetric about 0; the quadrature oracle confirms.
  const auto mixed = mixed_dist();
  CHECK(cdf_true(mixed, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
  const double quad = oracles::simpson_split(
      [&](double t) { return pdf_true(mixed, t); }, -40.0, 0.0,
      uniform_edges(mixed));
  CHECK(cdf_true(mixed, 0.0) == doctest::Approx(quad).epsilon(1e-9));
}

TEST_CASE("mixed_dist composition") {
  const auto mixed = mixed_dist();
  REQUIRE(mixed.components.size() == 4);
  for (const auto& [w, c] : mixed.components) CHECK(w == 0.25);

  // Only U(1,3) is active at x = 2; the normals contribute < 1e-15.
  double others = 0.0;
  for (const auto& [w, c] : mixed.components)
    if (c.kind == Component::Kind::Normal)
      others += w * pdf_true(single(c), 2.0);
  CHECK(others < 1e-15);
  CHECK(pdf_true(mixed, 2.0) == doctest::Approx(0.125).epsilon(1e-14));

  // Quadrature-oracle value at x = -5 (0.25 only to ~8e-6: the N(-7,0.5)
  // tail above -5 is real).
  CHECK(cdf_true(mixed, -5.0) ==
        doctest::Approx(0.2499920821895417).epsilon(1e-12));
  CHECK(cdf_true(mixed, -5.0) == doctest::Approx(0.25).epsilon(1e-4));
  const double quad = oracles::simpson_split(
      [&](double t) { return pdf_true(mixed, t); }, -40.0, -5.0, {});
  CHECK(cdf_true(mixed, -5.0) == doctest::Approx(quad).epsilon(1e-9));
}

TEST_CASE("bart_simpson composition") {
  const auto bart = bart_simpson();
  REQUIRE(bart.components.size() == 6);
  double total = 0.0;
  for (const auto& [w, c] : bart.components) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));

  const std::vector<double> means = {0.0, -1.0, -0.5, 0.0, 0.5, 1.0};
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(bart.components[i].second.mu == means[i]);
    CHECK(bart.components[i].second.sigma == (i == 0 ? 1.0 : 0.1));
  }
  CHECK(bart.components[0].first == 0.5);
  for (std::size_t i = 1; i < 6; ++i) CHECK(bart.components[i].first == 0.1);
}

TEST_CASE("sampling determinism and statistics") {
  const auto bart = bart_simpson();
  const Dataset a = sample(bart, 5, 7);
  const Dataset b = sample(bart, 5, 7);
  CHECK(a.points == b.points);

  const Dataset u = sample(single(Component::uniform(0, 1)), 100000, 11);
  double mean = 0.0;
  for (double x : u.points) mean += x;
  mean /= static_cast<double>(u.rows);
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));

  const Dataset big = sample(bart, 100000, 13);
  std::size_t below = 0;
  for (double x : big.points) below += (x <= 0.0);
  const double ecdf0 = static_cast<double>(below) / 100000.0;
  CHECK(std::abs(ecdf0 - cdf_true(bart, 0.0)) < 0.01);
}

TEST_CASE("cdf is non-decreasing (random pairs)") {
  Rng rng(99);
  for (const auto& spec : {bart_simpson(), mixed_dist()}) {
    for (int t = 0; t < 500; ++t) {
      double x = rng.uniform(-12, 12);
      double y = rng.uniform(-12, 12);
      if (x > y) std::swap(x, y);
      CHECK(cdf_true(spec, x) <= cdf_true(spec, y));
    }
  }
}

TEST_CASE("numeric derivative of cdf matches pdf at smooth points") {
  Rng rng(123);
  const auto specs = {bart_simpson(), mixed_dist()};
  for (const auto& spec : specs) {
    const auto edges = uniform_edges(spec);
    int checked = 0;
    while (checked < 200) {
      const double x = rng.uniform(-9, 9);
      bool near_edge = false;
      for (double e : edges) near_edge |= std::abs(x - e) < 1e-3;
      if (near_edge) continue;
      const double fd = oracles::central_diff(
          [&](double t) { return cdf_true(spec, t); }, x, 1e-5);
      CHECK(fd == doctest::Approx(pdf_true(spec, x)).epsilon(1e-6).scale(1.0));
      ++checked;
    }
  }
}

TEST_CASE("pdf integrates to one") {
  for (const auto& spec : {bart_simpson(), mixed_dist()}) {
    const double mass = oracles::simpson_split(
        [&](double t) { return pdf_true(spec, t); }, -20.0, 20.0,
        uniform_edges(spec));
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("validation rejects bad mixtures") {
  MixtureSpec s;
  CHECK_THROWS_AS(s.validate(), DataError);

  s.components = {{0.5, Component::normal(0, 1)},
                  {0.6, Component::normal(1, 1)}};
  CHECK_THROWS_AS(s.validate(), DataError);

  s.components = {{1.0, Component::normal(0, -1)}};
  CHECK_THROWS_AS(s.validate(), DataError);

  s.components = {{1.0, Component::uniform(3, 1)}};
  CHECK_THROWS_AS(s.validate(), DataError);

  CHECK_NOTHROW(bart_simpson().validate());
  CHECK_NOTHROW(mixed_dist().validate());
}

TEST_CASE("mixture json round trip") {
  const auto mixed = mixed_dist();
  const auto back = mixture_from_json(mixture_to_json(mixed));
  REQUIRE(back.components.size() == mixed.components.size());
  for (std::size_t i = 0; i < mixed.components.size(); ++i) {
    CHECK(back.components[i].first == mixed.components[i].first);
    CHECK(back.components[i].second.kind == mixed.components[i].second.kind);
  }

  const std::string doc =
      R"({"components":[{"w":0.5,"kind":"normal","mu":0.0,"sigma":1.0},)"
      R"({"w":0.5,"kind":"uniform","a":1.0,"b":3.0}]})";
  const auto spec = mixture_from_json(doc);
  CHECK(spec.components.size() == 2);
  CHECK(pdf_true(spec, 2.0) == doctest::Approx(0.25 + 0.5 * 0.05399096651));

  CHECK_THROWS_AS(mixture_from_json("{\"components\": ["), DataError);
  CHECK_THROWS_AS(
      mixture_from_json(R"({"components":[{"w":1.0,"kind":"beta"}]})"),
      DataError);
}
