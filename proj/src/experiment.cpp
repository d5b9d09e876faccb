#include "cdf2pdf/experiment.hpp"

#include <charconv>
#include <cmath>

#include "cdf2pdf/csv.hpp"
#include "cdf2pdf/errors.hpp"
#include "cdf2pdf/kde.hpp"
#include "cdf2pdf/targets.hpp"
#include "json.hpp"

namespace cdf2pdf {

namespace fs = std::filesystem;

ExperimentManifest default_manifest(const std::string& distribution,
                                    std::uint64_t seed) {
  ExperimentManifest m;
  m.distribution = distribution;
  m.seed = seed;
  m.train_cfg.batch_size = 100;
  m.train_cfg.adadelta_decay = 0.95;
  m.train_cfg.adadelta_eps = 1e-6;
  m.train_cfg.shuffle = true;
  if (distribution == "bart") {
    m.n = 1000;
    m.hidden = 16;
    m.train_cfg.epochs = 30000;
    m.finetune = false;
    m.kde_bandwidth = "0.05";
    m.grid = {-4.0, 4.0, 4001};
  } else if (distribution == "mixed") {
    m.n = 2000;
    m.hidden = 8;
    m.train_cfg.epochs = 10000;
    m.finetune = true;
    m.finetune_epochs = 5000;
    m.kde_bandwidth = "0.1";
    m.grid = {-10.0, 10.0, 8001};
  } else {
    throw DataError("unknown distribution: " + distribution);
  }
  m.out_dir = distribution + "_seed" + std::to_string(seed);
  return m;
}

std::string manifest_to_json(const ExperimentManifest& m) {
  nlohmann::json j;
  j["schema_version"] = m.schema_version;
  j["distribution"] = m.distribution;
  j["n"] = m.n;
  j["seed"] = m.seed;
  j["estimator"] = m.estimator;
  j["m_targets"] = m.resolved_m();
  j["margin"] = m.margin;
  j["include_data_points"] = m.include_data_points;
  j["hidden"] = m.hidden;
  j["init_scale"] = m.init_scale;
  j["epochs"] = m.train_cfg.epochs;
  j["batch_size"] = m.train_cfg.batch_size;
  j["adadelta_decay"] = m.train_cfg.adadelta_decay;
  j["adadelta_eps"] = m.train_cfg.adadelta_eps;
  j["shuffle"] = m.train_cfg.shuffle;
  j["finetune"] = m.finetune;
  j["finetune_epochs"] = m.finetune_epochs;
  j["alpha0"] = m.alpha0;
  j["kde_bandwidth"] = m.kde_bandwidth;
  j["grid_lo"] = m.grid.lo;
  j["grid_hi"] = m.grid.hi;
  j["grid_n"] = m.grid.n;
  j["out_dir"] = m.out_dir;
  return j.dump(2);
}

ExperimentManifest manifest_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("manifest parse failure: ") + e.what());
  }
  ExperimentManifest m;
  try {
    m.schema_version = j.at("schema_version").get<int>();
    if (m.schema_version != 1)
      throw DataError("unsupported manifest schema version");
    m.distribution = j.at("distribution").get<std::string>();
    m.n = j.at("n").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.estimator = j.at("estimator").get<std::string>();
    m.m_targets = j.at("m_targets").get<std::size_t>();
    m.margin = j.at("margin").get<double>();
    m.include_data_points = j.at("include_data_points").get<bool>();
    m.hidden = j.at("hidden").get<int>();
    m.init_scale = j.at("init_scale").get<double>();
    m.train_cfg.epochs = j.at("epochs").get<std::size_t>();
    m.train_cfg.batch_size = j.at("batch_size").get<std::size_t>();
    m.train_cfg.adadelta_decay = j.at("adadelta_decay").get<double>();
    m.train_cfg.adadelta_eps = j.at("adadelta_eps").get<double>();
    m.train_cfg.shuffle = j.at("shuffle").get<bool>();
    m.finetune = j.at("finetune").get<bool>();
    m.finetune_epochs = j.at("finetune_epochs").get<std::size_t>();
    m.alpha0 = j.at("alpha0").get<double>();
    m.kde_bandwidth = j.at("kde_bandwidth").get<std::string>();
    m.grid.lo = j.at("grid_lo").get<double>();
    m.grid.hi = j.at("grid_hi").get<double>();
    m.grid.n = j.at("grid_n").get<std::size_t>();
    m.out_dir = j.at("out_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("manifest field failure: ") + e.what());
  }
  return m;
}

MixtureSpec distribution_by_name(const std::string& name) {
  if (name == "bart") return bart_simpson();
  if (name == "mixed") return mixed_dist();
  throw DataError("unknown distribution: " + name);
}

double resolve_kde_bandwidth(const std::string& spec, const Dataset& data) {
  if (spec == "cv") {
    const auto candidates = default_bandwidth_candidates(data);
    return cv_bandwidth(data, candidates);
  }
  double h = 0.0;
  const auto res = std::from_chars(spec.data(), spec.data() + spec.size(), h);
  if (res.ec != std::errc{} || res.ptr != spec.data() + spec.size() ||
      !(h > 0.0))
    throw DataError("kde bandwidth must be a positive number or 'cv': " +
                    spec);
  return h;
}

std::string metrics_to_json(const EvalMetrics& m) {
  nlohmann::json j;
  j["ise_minn"] = m.ise_minn;
  j["ise_kde"] = m.ise_kde;
  j["sup_cdf"] = m.sup_cdf;
  j["negative_mass"] = m.negative_mass;
  j["kde_h"] = m.kde_h;
  return j.dump(2);
}

std::uint64_t stage_seed(const ExperimentManifest& m, int stage) {
  return m.seed + 1000003ULL * static_cast<std::uint64_t>(stage);
}

TargetSet make_targets(const ExperimentManifest& m, const Dataset& data) {
  if (m.estimator == "eq1")
    return targets_uniform(data, m.resolved_m(), m.margin, stage_seed(m, 1),
                           m.include_data_points);
  if (m.estimator == "eq2") return targets_loo(data);
  throw DataError("unknown target estimator: " + m.estimator);
}

EvalMetrics evaluate_model(const MinnModel& model, const MixtureSpec& spec,
                           const Dataset& data, const Grid1D& grid,
                           double kde_h,
                           const std::filesystem::path& curves_path) {
  grid.validate();
  if (model.d != 1) throw DataError("evaluation is defined for 1-D models");

  const KdeModel kde{data, kde_h};
  kde.validate();

  auto xs = sample_on_grid(grid, [](double x) { return x; });
  auto cdf_t = sample_on_grid(grid, [&](double x) { return cdf_true(spec, x); });
  auto cdf_m = sample_on_grid(grid, [&](double x) { return forward(model, x); });
  auto ecdf = sample_on_grid(grid, [&](double x) { return empirical_cdf(data, x); });
  auto pdf_t = sample_on_grid(grid, [&](double x) { return pdf_true(spec, x); });
  auto pdf_m = sample_on_grid(grid, [&](double x) { return pdf_at(model, x); });
  auto pdf_k = sample_on_grid(grid, [&](double x) { return kde_pdf(kde, x); });

  write_table_csv(
      {"x", "cdf_true", "cdf_minn", "ecdf", "pdf_true", "pdf_minn", "pdf_kde"},
      {xs, cdf_t, cdf_m, ecdf, pdf_t, pdf_m, pdf_k}, curves_path);

  EvalMetrics out;
  out.ise_minn = ise(pdf_m, pdf_t, grid);
  out.ise_kde = ise(pdf_k, pdf_t, grid);
  out.sup_cdf = sup_cdf_error(model, data, grid);
  out.negative_mass = negative_mass_fraction(pdf_m, grid);
  out.kde_h = kde_h;
  return out;
}

ExperimentOutputs run_experiment(const ExperimentManifest& manifest) {
  const MixtureSpec spec = distribution_by_name(manifest.distribution);
  manifest.grid.validate();
  if (manifest.n < 2) throw DataError("experiment needs n >= 2");
  if (manifest.train_cfg.epochs < 1)
    throw DataError("experiment needs epochs >= 1");

  const fs::path dir(manifest.out_dir);
  fs::create_directories(dir);

  ExperimentOutputs out;
  out.manifest = dir / "manifest.json";
  write_text_file(out.manifest, manifest_to_json(manifest));

  const Dataset data = sample(spec, manifest.n, stage_seed(manifest, 0));
  out.data = dir / "data.csv";
  write_dataset_csv(data, out.data);

  const TargetSet targets = make_targets(manifest, data);
  out.targets = dir / "targets.csv";
  write_targets_csv(targets, out.targets);

  MinnModel model = init_model(1, manifest.hidden, stage_seed(manifest, 2),
                               manifest.init_scale, &data);
  TrainConfig cfg = manifest.train_cfg;
  cfg.seed = stage_seed(manifest, 3);
  auto [trained, state] = train(std::move(model), targets, cfg);
  out.loss = dir / "loss.csv";
  write_loss_csv(state.loss_trace, out.loss);

  const double kde_h = resolve_kde_bandwidth(manifest.kde_bandwidth, data);

  if (!manifest.finetune) {
    out.model = dir / "model.json";
    write_text_file(out.model, model_to_json(trained));
    out.curves = dir / "curves.csv";
    out.final_metrics = evaluate_model(trained, spec, data, manifest.grid,
                                       kde_h, out.curves);
    out.metrics = dir / "metrics.json";
    write_text_file(out.metrics, metrics_to_json(out.final_metrics));
    return out;
  }

  out.model_smooth = dir / "model_smooth.json";
  write_text_file(out.model_smooth, model_to_json(trained));
  out.curves_prefinetune = dir / "curves_prefinetune.csv";
  out.prefinetune_metrics = evaluate_model(trained, spec, data, manifest.grid,
                                           kde_h, out.curves_prefinetune);
  out.metrics_prefinetune = dir / "metrics_prefinetune.json";
  write_text_file(out.metrics_prefinetune,
                  metrics_to_json(out.prefinetune_metrics));

  TrainConfig ft_cfg = manifest.train_cfg;
  ft_cfg.epochs = manifest.finetune_epochs;
  ft_cfg.seed = stage_seed(manifest, 4);
  auto [blended, ft_state] =
      finetune(trained, targets, ft_cfg, manifest.alpha0);
  out.loss_finetune = dir / "loss_finetune.csv";
  write_loss_csv(ft_state.loss_trace, out.loss_finetune);

  out.model = dir / "model.json";
  write_text_file(out.model, model_to_json(blended));
  out.curves = dir / "curves.csv";
  out.final_metrics =
      evaluate_model(blended, spec, data, manifest.grid, kde_h, out.curves);
  out.metrics = dir / "metrics.json";
  write_text_file(out.metrics, metrics_to_json(out.final_metrics));
  return out;
}

} // namespace cdf2pdf
