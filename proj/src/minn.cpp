#include "cdf2pdf/minn.hpp"

#include <algorithm>
#include <cmath>

#include "cdf2pdf/deriv_poly.hpp"
#include "cdf2pdf/errors.hpp"
#include "cdf2pdf/rng.hpp"
#include "json.hpp"

namespace cdf2pdf {

void MinnModel::validate() const {
  if (d < 1 || h < 1) throw DataError("model needs d >= 1 and h >= 1");
  const auto hd = static_cast<std::size_t>(h) * static_cast<std::size_t>(d);
  if (raw_w1.size() != hd || b1.size() != static_cast<std::size_t>(h) ||
      raw_w2.size() != static_cast<std::size_t>(h))
    throw DataError("model parameter shapes do not match d, h");
  if (activation == Activation::Blend) {
    if (alpha.size() != static_cast<std::size_t>(h))
      throw DataError("blend model needs one alpha per hidden unit");
  } else if (!alpha.empty()) {
    throw DataError("tanh model must not carry alpha values");
  }
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return std::isfinite(x); });
  };
  if (!finite(raw_w1) || !finite(b1) || !finite(raw_w2) || !finite(alpha) ||
      !std::isfinite(b2))
    throw DataError("model contains non-finite parameters");
}

double ramp(double x) { return std::clamp(x, -1.0, 1.0); }

double logistic(double a) { return 1.0 / (1.0 + std::exp(-a)); }

double eta(double x, double rho) {
  return rho * std::tanh(x) + (1.0 - rho) * ramp(x);
}

std::vector<double> pre_activations(const MinnModel& model,
                                    std::span<const double> x) {
  std::vector<double> z(model.h);
  for (int i = 0; i < model.h; ++i) {
    double acc = model.b1[i];
    for (int j = 0; j < model.d; ++j)
      acc += std::exp(model.raw_w1[i * model.d + j]) * x[j];
    z[i] = acc;
  }
  return z;
}

double forward(const MinnModel& model, std::span<const double> x) {
  double out = model.b2;
  for (int i = 0; i < model.h; ++i) {
    double z = model.b1[i];
    for (int j = 0; j < model.d; ++j)
      z += std::exp(model.raw_w1[i * model.d + j]) * x[j];
    const double a = model.activation == Activation::Tanh
                         ? std::tanh(z)
                         : eta(z, logistic(model.alpha[i]));
    out += std::exp(model.raw_w2[i]) * a;
  }
  return out;
}

double forward(const MinnModel& model, double x) {
  return forward(model, std::span<const double>(&x, 1));
}

double pdf_at(const MinnModel& model, std::span<const double> x) {
  double out = 0.0;
  for (int i = 0; i < model.h; ++i) {
    double z = model.b1[i];
    double raw_sum = model.raw_w2[i];
    for (int j = 0; j < model.d; ++j) {
      const double raw = model.raw_w1[i * model.d + j];
      z += std::exp(raw) * x[j];
      raw_sum += raw;
    }
    double deriv = tanh_nth_derivative(model.d, z);
    if (model.activation == Activation::Blend) {
      const double rho = logistic(model.alpha[i]);
      // The ramp's first derivative is the open-interval indicator of
      // (-1, 1); all higher derivatives vanish.
      const double ramp_d =
          (model.d == 1 && z > -1.0 && z < 1.0) ? 1.0 : 0.0;
      deriv = rho * deriv + (1.0 - rho) * ramp_d;
    }
    out += std::exp(raw_sum) * deriv;
  }
  return out;
}

double pdf_at(const MinnModel& model, double x) {
  return pdf_at(model, std::span<const double>(&x, 1));
}

MinnModel init_model(int d, int h, std::uint64_t seed, double scale,
                     const Dataset* data) {
  if (d < 1 || h < 1) throw DataError("init_model needs d >= 1 and h >= 1");
  if (data) {
    data->validate();
    if (data->cols != static_cast<std::size_t>(d))
      throw DataError("init_model data dimension does not match d");
  }

  MinnModel m;
  m.d = d;
  m.h = h;
  m.raw_w1.resize(static_cast<std::size_t>(h) * d);
  m.b1.resize(h);
  m.raw_w2.resize(h);
  m.b2 = 0.5;

  // Only the output weights carry the log(1/h) offset, keeping the
  // output sum near 1 for any width. Input weights start near 1 so the
  // hidden transitions stay localized enough to specialize.
  const double offset = std::log(static_cast<double>(h));
  Rng rng(seed);
  for (auto& w : m.raw_w1) w = rng.uniform(-scale, scale);
  for (auto& w : m.raw_w2) w = rng.uniform(-scale, scale) - offset;

  // Transition centers q_i tile the data range coordinatewise; each
  // unit's bias puts its pre-activation zero at its center.
  std::vector<std::vector<double>> sorted(d);
  if (data) {
    for (int j = 0; j < d; ++j) {
      sorted[j].resize(data->rows);
      for (std::size_t n = 0; n < data->rows; ++n)
        sorted[j][n] = data->at(n, j);
      std::sort(sorted[j].begin(), sorted[j].end());
    }
  }
  for (int i = 0; i < h; ++i) {
    const double p = (i + 0.5) / h;
    double bias = 0.0;
    for (int j = 0; j < d; ++j) {
      double q;
      if (data) {
        const auto idx = static_cast<std::size_t>(p * (data->rows - 1));
        q = sorted[j][idx];
      } else {
        q = -1.0 + 2.0 * p;
      }
      bias -= std::exp(m.raw_w1[i * d + j]) * q;
    }
    m.b1[i] = bias;
  }
  return m;
}

MinnModel to_blend(const MinnModel& model, double alpha0) {
  model.validate();
  if (model.activation == Activation::Blend)
    throw DataError("model is already in blend mode");
  MinnModel out = model;
  out.activation = Activation::Blend;
  out.alpha.assign(model.h, alpha0);
  return out;
}

std::string model_to_json(const MinnModel& model) {
  model.validate();
  nlohmann::json j;
  j["version"] = 1;
  j["d"] = model.d;
  j["h"] = model.h;
  j["activation"] =
      model.activation == Activation::Tanh ? "tanh" : "blend";
  auto w1 = nlohmann::json::array();
  for (int i = 0; i < model.h; ++i)
    w1.push_back(std::vector<double>(
        model.raw_w1.begin() + static_cast<std::ptrdiff_t>(i) * model.d,
        model.raw_w1.begin() + static_cast<std::ptrdiff_t>(i + 1) * model.d));
  j["raw_w1"] = std::move(w1);
  j["b1"] = model.b1;
  j["raw_w2"] = model.raw_w2;
  j["b2"] = model.b2;
  if (model.activation == Activation::Blend) j["alpha"] = model.alpha;
  return j.dump(2);
}

MinnModel model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(ModelFormatError::Kind::Parse,
                           std::string("model parse failure: ") + e.what());
  }

  MinnModel m;
  try {
    if (j.at("version").get<int>() != 1)
      throw ModelFormatError(ModelFormatError::Kind::Version,
                             "unsupported model version");
    m.d = j.at("d").get<int>();
    m.h = j.at("h").get<int>();
    const std::string act = j.at("activation").get<std::string>();
    if (act == "tanh")
      m.activation = Activation::Tanh;
    else if (act == "blend")
      m.activation = Activation::Blend;
    else
      throw ModelFormatError(ModelFormatError::Kind::Parse,
                             "unknown activation: " + act);

    const auto& w1 = j.at("raw_w1");
    for (const auto& row : w1) {
      if (static_cast<int>(row.size()) != m.d)
        throw ModelFormatError(ModelFormatError::Kind::Dimension,
                               "raw_w1 row length does not match d");
      for (const auto& v : row) m.raw_w1.push_back(v.get<double>());
    }
    m.b1 = j.at("b1").get<std::vector<double>>();
    m.raw_w2 = j.at("raw_w2").get<std::vector<double>>();
    m.b2 = j.at("b2").get<double>();
    if (m.activation == Activation::Blend)
      m.alpha = j.at("alpha").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(ModelFormatError::Kind::Parse,
                           std::string("model field failure: ") + e.what());
  }

  try {
    m.validate();
  } catch (const DataError& e) {
    throw ModelFormatError(ModelFormatError::Kind::Dimension, e.what());
  }
  return m;
}

} // namespace cdf2pdf
