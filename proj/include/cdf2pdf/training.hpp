#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cdf2pdf/minn.hpp"
#include "cdf2pdf/targets.hpp"

namespace cdf2pdf {

struct TrainConfig {
  std::size_t epochs = 1;
  std::size_t batch_size = 100;
  double adadelta_decay = 0.95;
  double adadelta_eps = 1e-6;
  std::uint64_t seed = 0;
  bool shuffle = true;
};

/// Gradient of the batch loss, mirroring the model's parameter shapes.
struct GradientVec {
  std::vector<double> raw_w1;
  std::vector<double> b1;
  std::vector<double> raw_w2;
  double b2 = 0.0;
  std::vector<double> alpha;
};

/// Adadelta accumulators (one pair per scalar parameter, in the flat
/// order raw_w1, b1, raw_w2, b2, alpha) plus the per-epoch loss trace.
struct TrainState {
  std::vector<double> grad_sq_avg;
  std::vector<double> update_sq_avg;
  std::size_t epoch = 0;
  std::vector<double> loss_trace;
};

/// Mean squared error of forward() against the target values.
double loss(const MinnModel& model, const TargetSet& batch);

/// Exact analytic gradient of loss(); the chain rule through the
/// exponential reparameterization multiplies each weight gradient by the
/// effective weight itself.
GradientVec backprop(const MinnModel& model, const TargetSet& batch);

/// One Adadelta update (no learning rate). Throws NumericError on a
/// non-finite gradient, leaving model and state untouched.
void adadelta_step(TrainState& state, MinnModel& model,
                   const GradientVec& grads, double decay, double eps);

/// Minibatch training: per epoch, optionally reshuffle, then one
/// Adadelta step per minibatch; records full-set loss once per epoch.
std::pair<MinnModel, TrainState> train(MinnModel model,
                                       const TargetSet& targets,
                                       const TrainConfig& config);

/// Blend-mode fine-tuning: to_blend(model, alpha0), then train with all
/// parameters (weights, biases, alphas) free.
std::pair<MinnModel, TrainState> finetune(const MinnModel& model,
                                          const TargetSet& targets,
                                          const TrainConfig& config,
                                          double alpha0 = kDefaultAlpha0);

} // namespace cdf2pdf
