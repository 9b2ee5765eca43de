// Exercises the installed command surface by spawning the real binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "nnstne/clustering.hpp"
#include "nnstne/dataset.hpp"
#include "nnstne/training.hpp"
#include "support.hpp"

namespace {

const std::string kCli = NNSTNE_CLI_PATH;

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

struct CliFixture {
  testsup::TempDir tmp;
  std::filesystem::path data_path;

  CliFixture() {
    const nnstne::TimeSeriesDataset data = testsup::sinusoid_pair(6, 32, 1234);
    data_path = tmp.path("toy.txt");
    nnstne::save_ucr(data, data_path);
  }

  std::string train_cmd(const std::filesystem::path& model, const std::string& extra = "") {
    return kCli + " train --data " + q(data_path) +
           " --length 8 --count 2 --iters 4 --seed 5 --out " + q(model) + " " + extra;
  }
};

}  // namespace

TEST_CASE("train writes a versioned model and a manifest") {
  CliFixture fx;
  const auto model_path = fx.tmp.path("model.json");
  const auto res = testsup::run_command(fx.train_cmd(model_path));
  CAPTURE(res.output);
  REQUIRE(res.exit_code == 0);

  const nnstne::TrainedModel model = nnstne::load_model(model_path);
  CHECK(model.bank.count() == 2);
  CHECK(testsup::read_file(model_path).find("nnstne-model-v1") != std::string::npos);

  const std::string manifest = testsup::read_file(fx.tmp.path("model.json.manifest.json"));
  CHECK(manifest.find("\"command\": \"train\"") != std::string::npos);
  CHECK(manifest.find("fnv1a64:") != std::string::npos);
  CHECK(manifest.find("\"shapelet_count\": 2") != std::string::npos);
  CHECK(manifest.find("\"auto\"") == std::string::npos);  // every value resolved
}

TEST_CASE("auto count resolves through the log2 rule in the manifest") {
  CliFixture fx;
  const auto model_path = fx.tmp.path("model_auto.json");
  const auto res = testsup::run_command(kCli + " train --data " + q(fx.data_path) +
                                        " --length 8 --count auto --iters 4 --seed 5 --out " +
                                        q(model_path));
  REQUIRE(res.exit_code == 0);
  const nnstne::TrainedModel model = nnstne::load_model(model_path);
  // N=12, Q-M=24, C=2 -> ceil(log2(576)) = 10
  CHECK(model.config.shapelet_count == 10);
}

TEST_CASE("missing required flag exits 2 with usage text") {
  const auto res = testsup::run_command(kCli + " train");
  CHECK(res.exit_code == 2);
  CHECK(res.output.find("--data") != std::string::npos);
  CHECK(res.output.find("Usage") != std::string::npos);
}

TEST_CASE("unknown flag and bad values exit 2") {
  CliFixture fx;
  CHECK(testsup::run_command(kCli + " train --bogus 1").exit_code == 2);
  CHECK(testsup::run_command(kCli + " evaluate --data " + q(fx.data_path) + " --features zzz")
            .exit_code == 2);
}

TEST_CASE("data errors exit 3") {
  const auto res = testsup::run_command(
      kCli + " train --data /nonexistent/file.txt --length 8 --out /tmp/x.json");
  CHECK(res.exit_code == 3);
  CHECK(testsup::run_command(kCli + " evaluate --data /nonexistent.txt --features raw").exit_code ==
        3);
}

TEST_CASE("evaluate prints RI= and writes a round-trippable report") {
  CliFixture fx;
  const auto model_path = fx.tmp.path("model.json");
  REQUIRE(testsup::run_command(fx.train_cmd(model_path)).exit_code == 0);

  const auto report_path = fx.tmp.path("report.json");
  const auto res = testsup::run_command(kCli + " evaluate --data " + q(fx.data_path) +
                                        " --model " + q(model_path) +
                                        " --features F --seed 3 --restarts 4 --out " +
                                        q(report_path));
  CAPTURE(res.output);
  REQUIRE(res.exit_code == 0);

  // last stdout line is RI=0.xxxx
  const auto pos = res.output.rfind("RI=");
  REQUIRE(pos != std::string::npos);
  const std::string line = res.output.substr(pos);
  CHECK(line.size() >= 9);
  CHECK(line[3] >= '0');
  CHECK(line[4] == '.');

  const nnstne::EvalReport report = nnstne::load_report(report_path);
  CHECK(report.feature_kind == "F");
  CHECK(report.seed == 3);
  CHECK(report.restarts == 4);
  CHECK(report.n_samples == 12);
}

TEST_CASE("evaluate with raw features needs no model") {
  CliFixture fx;
  const auto res = testsup::run_command(kCli + " evaluate --data " + q(fx.data_path) +
                                        " --features raw --out " + q(fx.tmp.path("raw.json")));
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("RI=") != std::string::npos);
  CHECK(std::filesystem::exists(fx.tmp.path("raw.json.manifest.json")));
}

TEST_CASE("export writes shapelets, features and loss CSVs") {
  CliFixture fx;
  const auto model_path = fx.tmp.path("model.json");
  REQUIRE(testsup::run_command(fx.train_cmd(model_path)).exit_code == 0);
  const nnstne::TrainedModel model = nnstne::load_model(model_path);

  SUBCASE("shapelets rows carry the trimmed lengths") {
    const auto csv = fx.tmp.path("shapelets.csv");
    REQUIRE(testsup::run_command(kCli + " export --model " + q(model_path) +
                                 " --what shapelets --out " + q(csv))
                .exit_code == 0);
    const std::string text = testsup::read_file(csv);
    std::size_t rows = 0;
    std::size_t start = 0;
    while (true) {
      const auto nl = text.find('\n', start);
      if (nl == std::string::npos) break;
      const std::string line = text.substr(start, nl - start);
      const auto commas = static_cast<long>(std::count(line.begin(), line.end(), ','));
      CHECK(commas + 1 == model.bank.shapelets[rows].size());
      ++rows;
      start = nl + 1;
    }
    CHECK(rows == static_cast<std::size_t>(model.bank.count()));
  }
  SUBCASE("features matrix is N x K") {
    const auto csv = fx.tmp.path("features.csv");
    REQUIRE(testsup::run_command(kCli + " export --model " + q(model_path) +
                                 " --what features --data " + q(fx.data_path) + " --out " + q(csv))
                .exit_code == 0);
    const std::string text = testsup::read_file(csv);
    CHECK(std::count(text.begin(), text.end(), '\n') == 12);
    const auto first = text.substr(0, text.find('\n'));
    CHECK(std::count(first.begin(), first.end(), ',') == model.bank.count() - 1);
  }
  SUBCASE("loss rows equal the history length") {
    const auto csv = fx.tmp.path("loss.csv");
    REQUIRE(testsup::run_command(kCli + " export --model " + q(model_path) +
                                 " --what loss --out " + q(csv))
                .exit_code == 0);
    const std::string text = testsup::read_file(csv);
    CHECK(text.rfind("iteration,spectral,diversity,l1,total\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') ==
          static_cast<long>(model.loss_history.size()) + 1);
  }
  SUBCASE("unreadable model exits 3") {
    CHECK(testsup::run_command(kCli + " export --model /nope.json --what loss --out /tmp/o.csv")
              .exit_code == 3);
  }
}

TEST_CASE("identical invocations produce byte-identical model and report") {
  CliFixture fx;
  const auto m1 = fx.tmp.path("m1.json");
  const auto m2 = fx.tmp.path("m2.json");
  REQUIRE(testsup::run_command(fx.train_cmd(m1, "--threads 1")).exit_code == 0);
  REQUIRE(testsup::run_command(fx.train_cmd(m2, "--threads 1")).exit_code == 0);
  CHECK(testsup::read_file(m1) == testsup::read_file(m2));

  const auto r1 = fx.tmp.path("r1.json");
  const auto r2 = fx.tmp.path("r2.json");
  const std::string eval = kCli + " evaluate --data " + q(fx.data_path) + " --model " + q(m1) +
                           " --features F --seed 11 --threads 1 --out ";
  REQUIRE(testsup::run_command(eval + q(r1)).exit_code == 0);
  REQUIRE(testsup::run_command(eval + q(r2)).exit_code == 0);
  CHECK(testsup::read_file(r1) == testsup::read_file(r2));
}

TEST_CASE("environment variable overrides supply flags") {
  CliFixture fx;
  const auto model_path = fx.tmp.path("env_model.json");
  const std::string cmd = "NNSTNE_LENGTH=8 " + kCli + " train --data " + q(fx.data_path) +
                          " --count 2 --iters 2 --out " + q(model_path);
  const auto res = testsup::run_command(cmd);
  CAPTURE(res.output);
  CHECK(res.exit_code == 0);
  CHECK(nnstne::load_model(model_path).config.shapelet_length == 8);
}
