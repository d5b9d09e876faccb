// cdf2pdf: density estimation by fitting a monotone network to the
// empirical CDF, then differentiating it in closed form.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cdf2pdf/csv.hpp"
#include "cdf2pdf/errors.hpp"
#include "cdf2pdf/experiment.hpp"
#include "cdf2pdf/kde.hpp"
#include "cdf2pdf/minn.hpp"
#include "cdf2pdf/targets.hpp"
#include "cdf2pdf/training.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace cdf2pdf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

// Relative outputs land under $CDF2PDF_OUT when it is set.
fs::path resolve_out(const std::string& path) {
  fs::path p(path);
  if (p.is_absolute()) return p;
  if (const char* root = std::getenv("CDF2PDF_OUT")) return fs::path(root) / p;
  return p;
}

void ensure_parent(const fs::path& p) {
  const auto dir = p.parent_path();
  if (!dir.empty()) fs::create_directories(dir);
}

struct SampleArgs {
  std::string dist = "bart";
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  std::string out = "data.csv";
};

struct TargetsArgs {
  std::string data;
  std::string estimator = "eq1";
  std::size_t m = 0;
  double margin = 0.1;
  std::uint64_t seed = 1;
  bool include_data_points = false;
  std::string out = "targets.csv";
};

struct TrainArgs {
  std::string data;
  std::string estimator = "eq1";
  std::size_t m = 0;
  double margin = 0.1;
  std::uint64_t targets_seed = 1;
  bool include_data_points = false;
  int hidden = 16;
  double init_scale = kDefaultInitScale;
  std::uint64_t init_seed = 2;
  std::size_t epochs = 1000;
  std::size_t batch = 100;
  double decay = 0.95;
  double eps = 1e-6;
  std::uint64_t seed = 3;
  bool no_shuffle = false;
  std::string out = "model.json";
  std::string loss_out = "loss.csv";
};

struct FinetuneArgs {
  std::string model;
  std::string data;
  std::string estimator = "eq1";
  std::size_t m = 0;
  double margin = 0.1;
  std::uint64_t targets_seed = 1;
  bool include_data_points = false;
  std::size_t epochs = 5000;
  std::size_t batch = 100;
  double decay = 0.95;
  double eps = 1e-6;
  std::uint64_t seed = 4;
  double alpha0 = kDefaultAlpha0;
  std::string out = "model_finetuned.json";
  std::string loss_out = "loss_finetune.csv";
};

struct EvalArgs {
  std::string model;
  std::string data;
  std::string dist = "bart";
  double grid_lo = -4.0;
  double grid_hi = 4.0;
  std::size_t grid_n = 4001;
  bool grid_set = false;
  std::string kde_h = "0.05";
  std::string curves_out = "curves.csv";
  std::string metrics_out = "metrics.json";
};

struct ExperimentArgs {
  std::string name = "bart";
  std::uint64_t seed = 1;
  std::string outdir;
  std::string from_manifest;
  std::size_t epochs = 0;           // 0 -> paper default
  std::size_t finetune_epochs = 0;  // 0 -> paper default
  std::size_t m = 0;                // 0 -> 10 * n
  std::size_t n = 0;                // 0 -> paper default
  std::string kde_h;                // empty -> paper default
};

TargetSet build_targets(const Dataset& data, const std::string& estimator,
                        std::size_t m, double margin, std::uint64_t seed,
                        bool include_data_points) {
  if (estimator == "eq1") {
    const std::size_t count = m ? m : 10 * data.rows;
    return targets_uniform(data, count, margin, seed, include_data_points);
  }
  if (estimator == "eq2") return targets_loo(data);
  throw DataError("unknown estimator: " + estimator);
}

int cmd_sample(const SampleArgs& a) {
  const auto spec = distribution_by_name(a.dist);
  const Dataset data = sample(spec, a.n, a.seed);
  const fs::path out = resolve_out(a.out);
  ensure_parent(out);
  write_dataset_csv(data, out);

  nlohmann::json side;
  side["command"] = "sample";
  side["distribution"] = a.dist;
  side["mixture"] = nlohmann::json::parse(mixture_to_json(spec));
  side["n"] = a.n;
  side["seed"] = a.seed;
  side["out"] = out.string();
  write_text_file(out.string() + ".manifest.json", side.dump(2));
  std::cout << "wrote " << data.rows << " points to " << out.string() << "\n";
  return kExitOk;
}

int cmd_targets(const TargetsArgs& a) {
  const Dataset data = read_dataset_csv(resolve_out(a.data));
  const TargetSet ts = build_targets(data, a.estimator, a.m, a.margin, a.seed,
                                     a.include_data_points);
  const fs::path out = resolve_out(a.out);
  ensure_parent(out);
  write_targets_csv(ts, out);
  std::cout << "wrote " << ts.size() << " targets to " << out.string() << "\n";
  return kExitOk;
}

int cmd_train(const TrainArgs& a) {
  const Dataset data = read_dataset_csv(resolve_out(a.data));
  const TargetSet ts = build_targets(data, a.estimator, a.m, a.margin,
                                     a.targets_seed, a.include_data_points);

  MinnModel model = init_model(static_cast<int>(data.cols), a.hidden,
                               a.init_seed, a.init_scale, &data);
  TrainConfig cfg;
  cfg.epochs = a.epochs;
  cfg.batch_size = a.batch;
  cfg.adadelta_decay = a.decay;
  cfg.adadelta_eps = a.eps;
  cfg.seed = a.seed;
  cfg.shuffle = !a.no_shuffle;

  auto [trained, state] = train(std::move(model), ts, cfg);

  const fs::path out = resolve_out(a.out);
  ensure_parent(out);
  write_text_file(out, model_to_json(trained));
  const fs::path loss_out = resolve_out(a.loss_out);
  ensure_parent(loss_out);
  write_loss_csv(state.loss_trace, loss_out);
  std::cout << "final loss " << format_double(state.loss_trace.back())
            << "; model at " << out.string() << "\n";
  return kExitOk;
}

int cmd_finetune(const FinetuneArgs& a) {
  const MinnModel model = model_from_json(read_text_file(resolve_out(a.model)));
  if (model.activation == Activation::Blend)
    throw DataError("already fine-tuned: model is in blend mode");
  const Dataset data = read_dataset_csv(resolve_out(a.data));
  const TargetSet ts = build_targets(data, a.estimator, a.m, a.margin,
                                     a.targets_seed, a.include_data_points);

  TrainConfig cfg;
  cfg.epochs = a.epochs;
  cfg.batch_size = a.batch;
  cfg.adadelta_decay = a.decay;
  cfg.adadelta_eps = a.eps;
  cfg.seed = a.seed;

  auto [tuned, state] = finetune(model, ts, cfg, a.alpha0);

  const fs::path out = resolve_out(a.out);
  ensure_parent(out);
  write_text_file(out, model_to_json(tuned));
  const fs::path loss_out = resolve_out(a.loss_out);
  ensure_parent(loss_out);
  write_loss_csv(state.loss_trace, loss_out);

  nlohmann::json side;
  side["command"] = "finetune";
  side["alpha0"] = a.alpha0;
  side["epochs"] = a.epochs;
  auto rho = nlohmann::json::array();
  for (double al : tuned.alpha) rho.push_back(logistic(al));
  side["final_rho"] = std::move(rho);
  side["final_loss"] = state.loss_trace.back();
  write_text_file(out.string() + ".manifest.json", side.dump(2));
  std::cout << "final loss " << format_double(state.loss_trace.back())
            << "; blend model at " << out.string() << "\n";
  return kExitOk;
}

int cmd_eval(const EvalArgs& a) {
  const MinnModel model = model_from_json(read_text_file(resolve_out(a.model)));
  const Dataset data = read_dataset_csv(resolve_out(a.data));
  const auto spec = distribution_by_name(a.dist);

  Grid1D grid{a.grid_lo, a.grid_hi, a.grid_n};
  if (!a.grid_set && a.dist == "mixed") grid = {-10.0, 10.0, 8001};

  const double h = resolve_kde_bandwidth(a.kde_h, data);
  const fs::path curves = resolve_out(a.curves_out);
  ensure_parent(curves);
  const EvalMetrics metrics = evaluate_model(model, spec, data, grid, h, curves);
  const fs::path mout = resolve_out(a.metrics_out);
  ensure_parent(mout);
  write_text_file(mout, metrics_to_json(metrics));
  std::cout << metrics_to_json(metrics) << "\n";
  return kExitOk;
}

int cmd_experiment(const ExperimentArgs& a) {
  ExperimentManifest manifest;
  if (!a.from_manifest.empty()) {
    manifest = manifest_from_json(read_text_file(resolve_out(a.from_manifest)));
    if (!a.outdir.empty()) manifest.out_dir = resolve_out(a.outdir).string();
  } else {
    manifest = default_manifest(a.name, a.seed);
    if (a.epochs) manifest.train_cfg.epochs = a.epochs;
    if (a.finetune_epochs) manifest.finetune_epochs = a.finetune_epochs;
    if (a.m) manifest.m_targets = a.m;
    if (a.n) manifest.n = a.n;
    if (!a.kde_h.empty()) manifest.kde_bandwidth = a.kde_h;
    if (!a.outdir.empty()) manifest.out_dir = a.outdir;
    manifest.out_dir = resolve_out(manifest.out_dir).string();
  }

  const auto outputs = run_experiment(manifest);
  std::cout << "experiment '" << manifest.distribution << "' seed "
            << manifest.seed << " done\n"
            << "  model:   " << outputs.model.string() << "\n"
            << "  metrics: " << outputs.metrics.string() << "\n"
            << metrics_to_json(outputs.final_metrics) << "\n";
  return kExitOk;
}

void print_defaults() {
  nlohmann::json j;
  j["bart"] = nlohmann::json::parse(manifest_to_json(default_manifest("bart", 1)));
  j["mixed"] = nlohmann::json::parse(manifest_to_json(default_manifest("mixed", 1)));
  std::cout << j.dump(2) << "\n";
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"cdf2pdf: monotone-network CDF regression with closed-form "
               "density inference"};
  app.require_subcommand(0, 1);
  bool show_defaults = false;
  app.add_flag("--show-defaults", show_defaults,
               "Print the frozen experiment defaults as JSON and exit");

  SampleArgs sa;
  auto* s = app.add_subcommand("sample", "Draw points from a synthetic mixture");
  s->add_option("--dist", sa.dist, "Distribution name")
      ->check(CLI::IsMember({"bart", "mixed"}));
  s->add_option("--n", sa.n, "Sample size")->check(CLI::Range(1, 100000000));
  s->add_option("--seed", sa.seed, "RNG seed");
  s->add_option("--out", sa.out, "Output CSV path");

  TargetsArgs ta;
  auto* t = app.add_subcommand("targets", "Build empirical-CDF targets");
  t->add_option("--data", ta.data, "Dataset CSV")->required();
  t->add_option("--estimator", ta.estimator, "eq1 (uniform) or eq2 (LOO)")
      ->check(CLI::IsMember({"eq1", "eq2"}));
  t->add_option("--m", ta.m, "Query count for eq1 (default 10x data size)");
  t->add_option("--margin", ta.margin, "Bounding-box margin fraction")
      ->check(CLI::NonNegativeNumber);
  t->add_option("--seed", ta.seed, "Query sampling seed");
  t->add_flag("--include-data-points", ta.include_data_points,
              "Also emit targets at the data points themselves");
  t->add_option("--out", ta.out, "Output CSV path");

  TrainArgs tr;
  auto* r = app.add_subcommand("train", "Fit a MINN to empirical-CDF targets");
  r->add_option("--data", tr.data, "Dataset CSV")->required();
  r->add_option("--targets", tr.estimator, "eq1 or eq2")
      ->check(CLI::IsMember({"eq1", "eq2"}));
  r->add_option("--m", tr.m, "Query count for eq1");
  r->add_option("--margin", tr.margin, "Bounding-box margin fraction")
      ->check(CLI::NonNegativeNumber);
  r->add_option("--targets-seed", tr.targets_seed, "Query sampling seed");
  r->add_flag("--include-data-points", tr.include_data_points,
              "Also fit targets at the data points");
  r->add_option("--hidden", tr.hidden, "Hidden node count")
      ->check(CLI::Range(1, 100000));
  r->add_option("--init-scale", tr.init_scale, "Raw-weight init half-width");
  r->add_option("--init-seed", tr.init_seed, "Init seed");
  r->add_option("--epochs", tr.epochs, "Training epochs")
      ->check(CLI::Range(1, 100000000));
  r->add_option("--batch", tr.batch, "Minibatch size")
      ->check(CLI::Range(1, 100000000));
  r->add_option("--decay", tr.decay, "Adadelta decay rho");
  r->add_option("--eps", tr.eps, "Adadelta epsilon");
  r->add_option("--seed", tr.seed, "Shuffle seed");
  r->add_flag("--no-shuffle", tr.no_shuffle, "Keep target order fixed");
  r->add_option("--out", tr.out, "Model JSON path");
  r->add_option("--loss-out", tr.loss_out, "Loss trace CSV path");

  FinetuneArgs fa;
  auto* f = app.add_subcommand(
      "finetune", "Swap tanh for the blended activation and retrain");
  f->add_option("--model", fa.model, "Trained tanh-mode model JSON")->required();
  f->add_option("--data", fa.data, "Dataset CSV")->required();
  f->add_option("--targets", fa.estimator, "eq1 or eq2")
      ->check(CLI::IsMember({"eq1", "eq2"}));
  f->add_option("--m", fa.m, "Query count for eq1");
  f->add_option("--margin", fa.margin, "Bounding-box margin fraction");
  f->add_option("--targets-seed", fa.targets_seed, "Query sampling seed");
  f->add_flag("--include-data-points", fa.include_data_points,
              "Also fit targets at the data points");
  f->add_option("--epochs", fa.epochs, "Fine-tune epochs")
      ->check(CLI::Range(1, 100000000));
  f->add_option("--batch", fa.batch, "Minibatch size")
      ->check(CLI::Range(1, 100000000));
  f->add_option("--decay", fa.decay, "Adadelta decay rho");
  f->add_option("--eps", fa.eps, "Adadelta epsilon");
  f->add_option("--seed", fa.seed, "Shuffle seed");
  f->add_option("--alpha0", fa.alpha0, "Initial alpha for every unit");
  f->add_option("--out", fa.out, "Blend model JSON path");
  f->add_option("--loss-out", fa.loss_out, "Loss trace CSV path");

  EvalArgs ea;
  auto* e = app.add_subcommand("eval", "Compare a model against ground truth");
  e->add_option("--model", ea.model, "Model JSON")->required();
  e->add_option("--data", ea.data, "Dataset CSV the model was trained on")
      ->required();
  e->add_option("--dist", ea.dist, "Ground-truth distribution")
      ->check(CLI::IsMember({"bart", "mixed"}));
  auto* glo = e->add_option("--grid-lo", ea.grid_lo, "Grid lower bound");
  auto* ghi = e->add_option("--grid-hi", ea.grid_hi, "Grid upper bound");
  auto* gn = e->add_option("--grid-n", ea.grid_n, "Grid point count");
  e->add_option("--kde-h", ea.kde_h, "KDE bandwidth, or 'cv'");
  e->add_option("--curves-out", ea.curves_out, "Curve table CSV path");
  e->add_option("--metrics-out", ea.metrics_out, "Metrics JSON path");
  e->callback([&] { ea.grid_set = glo->count() || ghi->count() || gn->count(); });

  ExperimentArgs xa;
  auto* x = app.add_subcommand(
      "experiment", "Run a full sample/targets/train/eval pipeline");
  x->add_option("name", xa.name, "bart or mixed")
      ->check(CLI::IsMember({"bart", "mixed"}));
  x->add_option("--seed", xa.seed, "Base seed for every stage");
  x->add_option("--outdir", xa.outdir, "Output directory");
  x->add_option("--from-manifest", xa.from_manifest,
                "Re-run exactly the configuration in a manifest JSON");
  x->add_option("--epochs", xa.epochs, "Override training epochs")
      ->check(CLI::Range(1, 100000000));
  x->add_option("--finetune-epochs", xa.finetune_epochs,
                "Override fine-tune epochs")
      ->check(CLI::Range(1, 100000000));
  x->add_option("--m", xa.m, "Override target count");
  x->add_option("--n", xa.n, "Override sample size");
  x->add_option("--kde-h", xa.kde_h, "Override KDE bandwidth (number or 'cv')");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (show_defaults) {
      print_defaults();
      return kExitOk;
    }
    if (s->parsed()) return cmd_sample(sa);
    if (t->parsed()) return cmd_targets(ta);
    if (r->parsed()) return cmd_train(tr);
    if (f->parsed()) return cmd_finetune(fa);
    if (e->parsed()) return cmd_eval(ea);
    if (x->parsed()) return cmd_experiment(xa);
    std::cerr << app.help();
    return kExitUsage;
  } catch (const NumericError& err) {
    std::cerr << "[numeric] " << err.what() << "\n";
    return kExitNumeric;
  } catch (const DataError& err) {
    std::cerr << "[data] " << err.what() << "\n";
    return kExitData;
  } catch (const std::exception& err) {
    std::cerr << "[error] " << err.what() << "\n";
    return kExitData;
  }
}
