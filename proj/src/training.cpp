#include "cdf2pdf/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cdf2pdf/errors.hpp"
#include "cdf2pdf/rng.hpp"

namespace cdf2pdf {

namespace {

void check_batch(const MinnModel& model, const TargetSet& batch) {
  if (batch.size() == 0) throw DataError("empty target batch");
  if (batch.dim() != static_cast<std::size_t>(model.d))
    throw DataError("target dimension does not match model");
  if (batch.points.rows != batch.values.size())
    throw DataError("target points/values size mismatch");
}

// Effective weights are fixed within a step; hoist the exponentials out
// of the per-sample loop.
struct EffectiveWeights {
  std::vector<double> u; // h x d
  std::vector<double> v; // h
  std::vector<double> rho;

  explicit EffectiveWeights(const MinnModel& m) {
    u.resize(m.raw_w1.size());
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = std::exp(m.raw_w1[k]);
    v.resize(m.raw_w2.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::exp(m.raw_w2[k]);
    if (m.activation == Activation::Blend) {
      rho.resize(m.alpha.size());
      for (std::size_t k = 0; k < rho.size(); ++k)
        rho[k] = logistic(m.alpha[k]);
    }
  }
};

double loss_over(const MinnModel& model, const EffectiveWeights& ew,
                 const TargetSet& targets,
                 std::span<const std::size_t> idx) {
  const int d = model.d;
  const int h = model.h;
  const bool blend = model.activation == Activation::Blend;
  double acc = 0.0;
  for (std::size_t n : idx) {
    const double* x = targets.points.row(n);
    double out = model.b2;
    for (int i = 0; i < h; ++i) {
      double z = model.b1[i];
      for (int j = 0; j < d; ++j) z += ew.u[i * d + j] * x[j];
      const double a = blend ? eta(z, ew.rho[i]) : std::tanh(z);
      out += ew.v[i] * a;
    }
    const double e = out - targets.values[n];
    acc += e * e;
  }
  return acc / static_cast<double>(idx.size());
}

GradientVec backprop_over(const MinnModel& model, const EffectiveWeights& ew,
                          const TargetSet& targets,
                          std::span<const std::size_t> idx) {
  const int d = model.d;
  const int h = model.h;
  const bool blend = model.activation == Activation::Blend;

  GradientVec g;
  g.raw_w1.assign(model.raw_w1.size(), 0.0);
  g.b1.assign(model.b1.size(), 0.0);
  g.raw_w2.assign(model.raw_w2.size(), 0.0);
  if (blend) g.alpha.assign(model.alpha.size(), 0.0);

  std::vector<double> z(h), act(h), actp(h);
  const double inv_m = 1.0 / static_cast<double>(idx.size());

  for (std::size_t n : idx) {
    const double* x = targets.points.row(n);
    double out = model.b2;
    for (int i = 0; i < h; ++i) {
      double zi = model.b1[i];
      for (int j = 0; j < d; ++j) zi += ew.u[i * d + j] * x[j];
      z[i] = zi;
      const double t = std::tanh(zi);
      if (blend) {
        const double rho = ew.rho[i];
        const double sp = (zi > -1.0 && zi < 1.0) ? 1.0 : 0.0;
        act[i] = rho * t + (1.0 - rho) * ramp(zi);
        actp[i] = rho * (1.0 - t * t) + (1.0 - rho) * sp;
      } else {
        act[i] = t;
        actp[i] = 1.0 - t * t;
      }
      out += ew.v[i] * act[i];
    }
    const double e = 2.0 * (out - targets.values[n]) * inv_m;
    g.b2 += e;
    for (int i = 0; i < h; ++i) {
      g.raw_w2[i] += e * ew.v[i] * act[i];
      const double gi = e * ew.v[i] * actp[i];
      g.b1[i] += gi;
      for (int j = 0; j < d; ++j)
        g.raw_w1[i * d + j] += gi * ew.u[i * d + j] * x[j];
      if (blend) {
        const double rho = ew.rho[i];
        g.alpha[i] += e * ew.v[i] * (std::tanh(z[i]) - ramp(z[i])) * rho *
                      (1.0 - rho);
      }
    }
  }
  return g;
}

std::vector<std::size_t> full_index(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

} // namespace

double loss(const MinnModel& model, const TargetSet& batch) {
  check_batch(model, batch);
  return loss_over(model, EffectiveWeights(model), batch,
                   full_index(batch.size()));
}

GradientVec backprop(const MinnModel& model, const TargetSet& batch) {
  check_batch(model, batch);
  return backprop_over(model, EffectiveWeights(model), batch,
                       full_index(batch.size()));
}

void adadelta_step(TrainState& state, MinnModel& model,
                   const GradientVec& grads, double decay, double eps) {
  if (!all_finite(grads.raw_w1) || !all_finite(grads.b1) ||
      !all_finite(grads.raw_w2) || !all_finite(grads.alpha) ||
      !std::isfinite(grads.b2))
    throw NumericError("non-finite gradient; model left unchanged");

  const std::size_t p = model.parameter_count();
  if (state.grad_sq_avg.empty()) {
    state.grad_sq_avg.assign(p, 0.0);
    state.update_sq_avg.assign(p, 0.0);
  }
  if (state.grad_sq_avg.size() != p)
    throw DataError("optimizer state does not match model shape");

  std::size_t k = 0;
  auto update = [&](double& param, double grad) {
    double& eg2 = state.grad_sq_avg[k];
    double& ed2 = state.update_sq_avg[k];
    eg2 = decay * eg2 + (1.0 - decay) * grad * grad;
    const double step = -std::sqrt(ed2 + eps) / std::sqrt(eg2 + eps) * grad;
    ed2 = decay * ed2 + (1.0 - decay) * step * step;
    param += step;
    ++k;
  };

  for (std::size_t i = 0; i < model.raw_w1.size(); ++i)
    update(model.raw_w1[i], grads.raw_w1[i]);
  for (std::size_t i = 0; i < model.b1.size(); ++i)
    update(model.b1[i], grads.b1[i]);
  for (std::size_t i = 0; i < model.raw_w2.size(); ++i)
    update(model.raw_w2[i], grads.raw_w2[i]);
  update(model.b2, grads.b2);
  for (std::size_t i = 0; i < model.alpha.size(); ++i)
    update(model.alpha[i], grads.alpha[i]);
}

std::pair<MinnModel, TrainState> train(MinnModel model,
                                       const TargetSet& targets,
                                       const TrainConfig& config) {
  model.validate();
  check_batch(model, targets);
  if (config.epochs < 1) throw DataError("training needs epochs >= 1");
  if (config.batch_size < 1) throw DataError("training needs batch_size >= 1");
  if (!all_finite(targets.values))
    throw NumericError("non-finite target values");

  const std::size_t m = targets.size();
  TrainState state;
  state.loss_trace.reserve(config.epochs);

  Rng rng(config.seed);
  std::vector<std::size_t> idx = full_index(m);
  const std::vector<std::size_t> trace_idx = full_index(m);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle)
      for (std::size_t i = m - 1; i > 0; --i)
        std::swap(idx[i], idx[rng.below(i + 1)]);

    for (std::size_t start = 0; start < m; start += config.batch_size) {
      const std::size_t len = std::min(config.batch_size, m - start);
      const std::span<const std::size_t> batch(idx.data() + start, len);
      const EffectiveWeights ew(model);
      const GradientVec grads = backprop_over(model, ew, targets, batch);
      adadelta_step(state, model, grads, config.adadelta_decay,
                    config.adadelta_eps);
    }

    const double epoch_loss =
        loss_over(model, EffectiveWeights(model), targets, trace_idx);
    if (!std::isfinite(epoch_loss))
      throw NumericError("training diverged: non-finite loss at epoch " +
                         std::to_string(epoch + 1));
    state.loss_trace.push_back(epoch_loss);
    state.epoch = epoch + 1;
  }
  return {std::move(model), std::move(state)};
}

std::pair<MinnModel, TrainState> finetune(const MinnModel& model,
                                          const TargetSet& targets,
                                          const TrainConfig& config,
                                          double alpha0) {
  return train(to_blend(model, alpha0), targets, config);
}

} // namespace cdf2pdf
