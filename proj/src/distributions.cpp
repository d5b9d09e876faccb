#include "cdf2pdf/distributions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cdf2pdf/errors.hpp"
#include "cdf2pdf/rng.hpp"
#include "json.hpp"

namespace cdf2pdf {

namespace {

double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) /
         (sigma * std::sqrt(2.0 * std::numbers::pi));
}

// erfc keeps full relative accuracy in the tails, where the difference
// 0.5*(1 + erf(z)) would cancel.
double normal_cdf(double x, double mu, double sigma) {
  const double z = (x - mu) / (sigma * std::numbers::sqrt2);
  return 0.5 * std::erfc(-z);
}

double uniform_pdf(double x, double a, double b) {
  return (x >= a && x <= b) ? 1.0 / (b - a) : 0.0;
}

double uniform_cdf(double x, double a, double b) {
  if (x <= a) return 0.0;
  if (x >= b) return 1.0;
  return (x - a) / (b - a);
}

} // namespace

void MixtureSpec::validate() const {
  if (components.empty()) throw DataError("mixture has no components");
  double total = 0.0;
  for (const auto& [w, c] : components) {
    if (!(w > 0.0)) throw DataError("mixture weight must be positive");
    total += w;
    if (c.kind == Component::Kind::Normal) {
      if (!(c.sigma > 0.0)) throw DataError("normal component needs sigma > 0");
    } else {
      if (!(c.a < c.b)) throw DataError("uniform component needs a < b");
    }
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw DataError("mixture weights must sum to 1");
}

Dataset Dataset::from_column(std::vector<double> values) {
  Dataset d;
  d.rows = values.size();
  d.cols = 1;
  d.points = std::move(values);
  return d;
}

void Dataset::validate() const {
  if (rows < 1 || cols < 1) throw DataError("dataset must be non-empty");
  if (points.size() != rows * cols)
    throw DataError("dataset storage does not match its shape");
  for (double v : points)
    if (!std::isfinite(v)) throw DataError("dataset contains non-finite value");
}

double pdf_true(const MixtureSpec& spec, double x) {
  double out = 0.0;
  for (const auto& [w, c] : spec.components)
    out += w * (c.kind == Component::Kind::Normal
                    ? normal_pdf(x, c.mu, c.sigma)
                    : uniform_pdf(x, c.a, c.b));
  return out;
}

double cdf_true(const MixtureSpec& spec, double x) {
  double out = 0.0;
  for (const auto& [w, c] : spec.components)
    out += w * (c.kind == Component::Kind::Normal
                    ? normal_cdf(x, c.mu, c.sigma)
                    : uniform_cdf(x, c.a, c.b));
  return out;
}

Dataset sample(const MixtureSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Categorical draw on the weights.
    const double u = rng.uniform();
    double acc = 0.0;
    const Component* chosen = &spec.components.back().second;
    for (const auto& [w, c] : spec.components) {
      acc += w;
      if (u < acc) {
        chosen = &c;
        break;
      }
    }
    if (chosen->kind == Component::Kind::Normal)
      values[i] = chosen->mu + chosen->sigma * rng.normal();
    else
      values[i] = chosen->a + (chosen->b - chosen->a) * rng.uniform();
  }
  return Dataset::from_column(std::move(values));
}

MixtureSpec bart_simpson() {
  MixtureSpec spec;
  spec.components.push_back({0.5, Component::normal(0.0, 1.0)});
  for (int j = 0; j <= 4; ++j)
    spec.components.push_back({0.1, Component::normal(j / 2.0 - 1.0, 0.1)});
  return spec;
}

MixtureSpec mixed_dist() {
  MixtureSpec spec;
  spec.components.push_back({0.25, Component::normal(-7.0, 0.5)});
  spec.components.push_back({0.25, Component::uniform(-3.0, -1.0)});
  spec.components.push_back({0.25, Component::uniform(1.0, 3.0)});
  spec.components.push_back({0.25, Component::normal(7.0, 0.5)});
  return spec;
}

std::string mixture_to_json(const MixtureSpec& spec) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& [w, c] : spec.components) {
    nlohmann::json j;
    j["w"] = w;
    if (c.kind == Component::Kind::Normal) {
      j["kind"] = "normal";
      j["mu"] = c.mu;
      j["sigma"] = c.sigma;
    } else {
      j["kind"] = "uniform";
      j["a"] = c.a;
      j["b"] = c.b;
    }
    comps.push_back(std::move(j));
  }
  return nlohmann::json{{"components", std::move(comps)}}.dump();
}

MixtureSpec mixture_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("mixture JSON parse failure: ") + e.what());
  }
  MixtureSpec spec;
  try {
    for (const auto& j : doc.at("components")) {
      const double w = j.at("w").get<double>();
      const std::string kind = j.at("kind").get<std::string>();
      if (kind == "normal")
        spec.components.push_back(
            {w, Component::normal(j.at("mu").get<double>(),
                                  j.at("sigma").get<double>())});
      else if (kind == "uniform")
        spec.components.push_back(
            {w, Component::uniform(j.at("a").get<double>(),
                                   j.at("b").get<double>())});
      else
        throw DataError("unknown component kind: " + kind);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("mixture JSON field failure: ") + e.what());
  }
  spec.validate();
  return spec;
}

} // namespace cdf2pdf
