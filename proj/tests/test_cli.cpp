#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "cdf2pdf/csv.hpp"
#include "cdf2pdf/minn.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace cdf2pdf;

namespace {

const std::string kCli = CDF2PDF_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("cdf2pdf_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) { return read_text_file(path); }

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += (c == '\n');
  return n;
}

} // namespace

TEST_CASE("sample writes deterministic csv plus manifest") {
  TempDir dir;
  const auto out = dir.file("data.csv");
  REQUIRE(run("sample --dist bart --n 1000 --seed 1 --out " + out) == 0);
  const auto first = slurp(out);
  CHECK(line_count(first) == 1000);
  CHECK(fs::exists(out + ".manifest.json"));

  REQUIRE(run("sample --dist bart --n 1000 --seed 1 --out " + out) == 0);
  CHECK(slurp(out) == first);

  const auto out2 = dir.file("mixed.csv");
  REQUIRE(run("sample --dist mixed --n 2000 --seed 1 --out " + out2) == 0);
  CHECK(line_count(slurp(out2)) == 2000);

  CHECK(run("sample --dist cauchy --n 10 --seed 1 --out " + out) == 1);
  // A regular file in the parent position makes the path unwritable.
  CHECK(run("sample --dist bart --n 10 --seed 1 --out " + out + "/x.csv") == 2);
}

TEST_CASE("targets subcommand") {
  TempDir dir;
  const auto data = dir.file("data.csv");
  REQUIRE(run("sample --dist bart --n 50 --seed 3 --out " + data) == 0);

  const auto out = dir.file("targets.csv");
  REQUIRE(run("targets --data " + data + " --m 200 --seed 5 --out " + out) == 0);
  const auto text = slurp(out);
  CHECK(line_count(text) == 201); // header + rows
  CHECK(text.substr(0, text.find('\n')) == "x_1,g_hat");

  const auto loo = dir.file("loo.csv");
  REQUIRE(run("targets --data " + data + " --estimator eq2 --out " + loo) == 0);
  CHECK(line_count(slurp(loo)) == 51);

  CHECK(run("targets --data " + dir.file("missing.csv") + " --out " + out) == 2);
}

TEST_CASE("train, finetune, eval pipeline") {
  TempDir dir;
  const auto data = dir.file("data.csv");
  REQUIRE(run("sample --dist mixed --n 200 --seed 2 --out " + data) == 0);

  const auto model = dir.file("model.json");
  const auto loss_csv = dir.file("loss.csv");
  REQUIRE(run("train --data " + data +
              " --hidden 8 --epochs 40 --m 400 --out " + model +
              " --loss-out " + loss_csv) == 0);
  const auto m = model_from_json(slurp(model));
  CHECK(m.activation == Activation::Tanh);
  CHECK(m.h == 8);
  CHECK(line_count(slurp(loss_csv)) == 41);

  CHECK(run("train --data " + data + " --epochs 0 --out " + model) == 1);

  const auto tuned = dir.file("tuned.json");
  REQUIRE(run("finetune --model " + model + " --data " + data +
              " --epochs 30 --m 400 --out " + tuned) == 0);
  const auto mt = model_from_json(slurp(tuned));
  CHECK(mt.activation == Activation::Blend);
  const auto side = nlohmann::json::parse(slurp(tuned + ".manifest.json"));
  CHECK(side.at("alpha0").get<double>() == 3.0);
  CHECK(side.at("final_rho").size() == 8);

  // A blend-mode file cannot be fine-tuned again.
  CHECK(run("finetune --model " + tuned + " --data " + data +
            " --epochs 10 --out " + dir.file("again.json")) == 2);

  const auto curves = dir.file("curves.csv");
  const auto metrics = dir.file("metrics.json");
  REQUIRE(run("eval --model " + tuned + " --data " + data +
              " --dist mixed --kde-h 0.1 --curves-out " + curves +
              " --metrics-out " + metrics) == 0);
  const auto mj = nlohmann::json::parse(slurp(metrics));
  for (const char* key :
       {"ise_minn", "ise_kde", "sup_cdf", "negative_mass", "kde_h"})
    CHECK(mj.contains(key));
  CHECK(mj.at("kde_h").get<double>() == 0.1);
  CHECK(mj.at("negative_mass").get<double>() == 0.0);

  // Curves: strictly increasing x, no non-finite cells anywhere.
  std::istringstream cs(slurp(curves));
  std::string line;
  std::getline(cs, line);
  CHECK(line == "x,cdf_true,cdf_minn,ecdf,pdf_true,pdf_minn,pdf_kde");
  double prev_x = -1e300;
  std::size_t rows = 0;
  while (std::getline(cs, line)) {
    std::istringstream ls(line);
    std::string cell;
    int col = 0;
    while (std::getline(ls, cell, ',')) {
      const double v = std::stod(cell);
      CHECK(std::isfinite(v));
      if (col == 0) {
        CHECK(v > prev_x);
        prev_x = v;
      }
      ++col;
    }
    CHECK(col == 7);
    ++rows;
  }
  CHECK(rows == 8001);

  // cv bandwidth is reported in the metrics.
  REQUIRE(run("eval --model " + tuned + " --data " + data +
              " --dist mixed --kde-h cv --curves-out " + curves +
              " --metrics-out " + metrics) == 0);
  const auto mj2 = nlohmann::json::parse(slurp(metrics));
  CHECK(mj2.at("kde_h").get<double>() > 0.0);
}

TEST_CASE("experiment pipeline with manifest replay") {
  TempDir dir;
  const auto out1 = dir.file("run1");
  REQUIRE(run("experiment bart --seed 1 --epochs 60 --m 500 --n 200 "
              "--outdir " + out1) == 0);
  for (const char* name : {"manifest.json", "data.csv", "targets.csv",
                           "model.json", "loss.csv", "curves.csv",
                           "metrics.json"})
    CHECK(fs::exists(fs::path(out1) / name));

  // Replay from the manifest into a second directory: byte-identical
  // model and metrics.
  const auto out2 = dir.file("run2");
  REQUIRE(run("experiment --from-manifest " + out1 +
              "/manifest.json --outdir " + out2) == 0);
  CHECK(slurp(out1 + "/model.json") == slurp(out2 + "/model.json"));
  CHECK(slurp(out1 + "/metrics.json") == slurp(out2 + "/metrics.json"));
  CHECK(slurp(out1 + "/data.csv") == slurp(out2 + "/data.csv"));

  // The mixed experiment also emits pre-fine-tune artifacts.
  const auto out3 = dir.file("run3");
  REQUIRE(run("experiment mixed --seed 1 --epochs 50 --finetune-epochs 25 "
              "--m 400 --n 150 --outdir " + out3) == 0);
  for (const char* name :
       {"model_smooth.json", "curves_prefinetune.csv",
        "metrics_prefinetune.json", "loss_finetune.csv", "model.json"})
    CHECK(fs::exists(fs::path(out3) / name));
  const auto final_model = model_from_json(slurp(out3 + "/model.json"));
  CHECK(final_model.activation == Activation::Blend);

  // Two seeds produce disjoint directories with different data.
  const auto out4 = dir.file("run4");
  REQUIRE(run("experiment bart --seed 2 --epochs 60 --m 500 --n 200 "
              "--outdir " + out4) == 0);
  CHECK(slurp(out1 + "/data.csv") != slurp(out4 + "/data.csv"));
}

TEST_CASE("defaults table") {
  TempDir dir;
  const auto defaults = dir.file("defaults.json");
  const std::string cmd =
      kCli + " --show-defaults > " + defaults + " 2>/dev/null";
  REQUIRE(std::system(cmd.c_str()) == 0);
  const auto j = nlohmann::json::parse(slurp(defaults));
  CHECK(j.at("bart").at("epochs").get<std::size_t>() == 30000);
  CHECK(j.at("bart").at("hidden").get<int>() == 16);
  CHECK(j.at("bart").at("n").get<std::size_t>() == 1000);
  CHECK(j.at("bart").at("kde_bandwidth").get<std::string>() == "0.05");
  CHECK(j.at("mixed").at("epochs").get<std::size_t>() == 10000);
  CHECK(j.at("mixed").at("hidden").get<int>() == 8);
  CHECK(j.at("mixed").at("n").get<std::size_t>() == 2000);
  CHECK(j.at("mixed").at("finetune_epochs").get<std::size_t>() == 5000);
  CHECK(j.at("mixed").at("kde_bandwidth").get<std::string>() == "0.1");
  CHECK(j.at("bart").at("batch_size").get<std::size_t>() == 100);
  CHECK(j.at("bart").at("adadelta_decay").get<double>() == 0.95);
  CHECK(j.at("bart").at("adadelta_eps").get<double>() == 1e-6);
}
