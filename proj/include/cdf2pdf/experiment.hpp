#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "cdf2pdf/distributions.hpp"
#include "cdf2pdf/metrics.hpp"
#include "cdf2pdf/minn.hpp"
#include "cdf2pdf/training.hpp"

namespace cdf2pdf {

/// Every knob of one experiment run, defaults included, so a run can be
/// reproduced from its manifest alone.
struct ExperimentManifest {
  int schema_version = 1;
  std::string distribution = "bart"; // bart | mixed
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  std::string estimator = "eq1"; // eq1 | eq2
  std::size_t m_targets = 0;     // 0 -> 10 * n
  double margin = 0.1;
  bool include_data_points = false;
  int hidden = 16;
  double init_scale = kDefaultInitScale;
  TrainConfig train_cfg;
  bool finetune = false;
  std::size_t finetune_epochs = 5000;
  double alpha0 = kDefaultAlpha0;
  std::string kde_bandwidth = "0.05"; // a number, or "cv"
  Grid1D grid{-4.0, 4.0, 4001};
  std::string out_dir = "out";

  std::size_t resolved_m() const { return m_targets ? m_targets : 10 * n; }
};

/// Paper-parameter defaults for the two experiments.
ExperimentManifest default_manifest(const std::string& distribution,
                                    std::uint64_t seed);

std::string manifest_to_json(const ExperimentManifest& m);
ExperimentManifest manifest_from_json(const std::string& text);

MixtureSpec distribution_by_name(const std::string& name);

/// Either a positive number or "cv" (leave-one-out selection on `data`).
double resolve_kde_bandwidth(const std::string& spec, const Dataset& data);

struct EvalMetrics {
  double ise_minn = 0.0;
  double ise_kde = 0.0;
  double sup_cdf = 0.0;
  double negative_mass = 0.0;
  double kde_h = 0.0;
};

std::string metrics_to_json(const EvalMetrics& m);

/// Writes the curve table (x, cdf_true, cdf_minn, ecdf, pdf_true,
/// pdf_minn, pdf_kde) and returns the comparison metrics.
EvalMetrics evaluate_model(const MinnModel& model, const MixtureSpec& spec,
                           const Dataset& data, const Grid1D& grid,
                           double kde_h,
                           const std::filesystem::path& curves_path);

/// Per-stage seeds derived from the manifest seed.
std::uint64_t stage_seed(const ExperimentManifest& m, int stage);

TargetSet make_targets(const ExperimentManifest& m, const Dataset& data);

struct ExperimentOutputs {
  std::filesystem::path manifest;
  std::filesystem::path data;
  std::filesystem::path targets;
  std::filesystem::path model;        // final model
  std::filesystem::path model_smooth; // pre-finetune model (finetune runs)
  std::filesystem::path loss;
  std::filesystem::path loss_finetune;
  std::filesystem::path curves;
  std::filesystem::path metrics;
  std::filesystem::path curves_prefinetune;
  std::filesystem::path metrics_prefinetune;
  EvalMetrics final_metrics;
  EvalMetrics prefinetune_metrics; // finetune runs only
};

/// Full pipeline: sample -> targets -> train [-> finetune] -> eval, with
/// every artifact written under manifest.out_dir.
ExperimentOutputs run_experiment(const ExperimentManifest& manifest);

} // namespace cdf2pdf
