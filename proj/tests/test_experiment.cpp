#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <json.hpp>
#include <string>

#include "idprior/errors.hpp"
#include "idprior/experiment.hpp"
#include "idprior/io.hpp"

using namespace idprior;
using nlohmann::json;

namespace {

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("idprior_exp_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }

  std::filesystem::path write_config(const json& body) const {
    auto file = path / "config.json";
    write_text_file(file, body.dump(2) + "\n");
    return file;
  }
};

json sample_prior_config() {
  return json{{"experiment", "sample_prior"},
              {"seed", 42},
              {"n_grid", 128},
              {"n_draws", 6},
              {"prior",
               {{"basis", "haar_periodic"},
                {"n_terms", 32},
                {"coeff_law", {{"kind", "gpq"}, {"p", 0.5}, {"q", 0.5}}}}}};
}

}  // namespace

TEST_CASE("unknown config fields are rejected") {
  TempDir tmp("unknown");
  auto body = sample_prior_config();
  body["surprise"] = 1;
  CHECK_THROWS_AS(validate_config(tmp.write_config(body)), InvalidArgument);

  auto body2 = sample_prior_config();
  body2["prior"]["rate"] = 1.0;
  CHECK_THROWS_AS(validate_config(tmp.write_config(body2)), InvalidArgument);
}

TEST_CASE("required and malformed fields are rejected") {
  TempDir tmp("required");
  json body = {{"seed", 1}};
  CHECK_THROWS_AS(validate_config(tmp.write_config(body)), InvalidArgument);

  json bad_kind = {{"experiment", "nope"}};
  CHECK_THROWS_AS(validate_config(tmp.write_config(bad_kind)), InvalidArgument);

  auto file = tmp.path / "broken.json";
  write_text_file(file, "{not json");
  CHECK_THROWS_AS(validate_config(file), InvalidArgument);

  auto negative = sample_prior_config();
  negative["prior"]["coeff_law"]["p"] = -1.0;
  CHECK_THROWS_AS(validate_config(tmp.write_config(negative)), InvalidArgument);
}

TEST_CASE("validate reports resolved settings") {
  TempDir tmp("report");
  auto report = validate_config(tmp.write_config(sample_prior_config()));
  CHECK(report.find("valid") == 0);
  CHECK(report.find("experiment: sample_prior") != std::string::npos);
  CHECK(report.find("seed: 42") != std::string::npos);
}

TEST_CASE("sample_prior writes the declared artifacts") {
  TempDir tmp("artifacts");
  auto config = tmp.write_config(sample_prior_config());
  ExperimentOptions options;
  options.output_dir = (tmp.path / "out").string();
  run_experiment(config, options);

  auto manifest = json::parse(read_text_file(tmp.path / "out" / "manifest.json"));
  CHECK(manifest["status"] == "complete");
  CHECK(manifest["seed"] == 42);
  for (const auto& artifact : manifest["artifacts"])
    CHECK(std::filesystem::exists(tmp.path / "out" / artifact.get<std::string>()));
  CHECK(read_series_csv(tmp.path / "out" / "field.csv").size() == 128);
}

TEST_CASE("reruns with the same seed are byte identical") {
  TempDir tmp("rerun");
  auto config = tmp.write_config(sample_prior_config());
  ExperimentOptions options;
  options.reference = true;
  for (const char* dir : {"out1", "out2"}) {
    options.output_dir = (tmp.path / dir).string();
    run_experiment(config, options);
  }
  for (const char* name : {"field.csv", "coefficients.csv", "mean_field.csv",
                           "summary.json"})
    CHECK(read_text_file(tmp.path / "out1" / name) ==
          read_text_file(tmp.path / "out2" / name));

  ExperimentOptions other = options;
  other.seed = 43;
  other.output_dir = (tmp.path / "out3").string();
  run_experiment(config, other);
  CHECK(read_text_file(tmp.path / "out1" / "field.csv") !=
        read_text_file(tmp.path / "out3" / "field.csv"));
}

TEST_CASE("make synthetic produces a consistent triple") {
  TempDir tmp("synthetic");
  json body = {{"experiment", "deconv_gpq"},
               {"seed", 5},
               {"n_grid", 64},
               {"prior", {{"n_terms", 16}}},
               {"forward", {{"kernel_width", 0.05}, {"obs_count", 8}}},
               {"noise", {{"sigma", 0.1}}}};
  auto config = tmp.write_config(body);
  ExperimentOptions options;
  options.output_dir = (tmp.path / "synth").string();
  make_synthetic(config, options);

  auto truth = read_series_csv(tmp.path / "synth" / "truth.csv");
  auto clean = read_series_csv(tmp.path / "synth" / "clean.csv");
  auto data = read_series_csv(tmp.path / "synth" / "data.csv");
  CHECK(truth.size() == 64);
  CHECK(clean.size() == 8);
  CHECK(data.size() == 8);
  double rms = 0.0;
  for (std::size_t j = 0; j < 8; ++j)
    rms += (data[j] - clean[j]) * (data[j] - clean[j]);
  rms = std::sqrt(rms / 8.0);
  CHECK(rms > 0.0);
  CHECK(rms < 0.5);  // sigma = 0.1 noise scale
}

TEST_CASE("deconv experiments honor an explicit data file") {
  TempDir tmp("datafile");
  json body = {{"experiment", "deconv_gpq"},
               {"seed", 5},
               {"n_grid", 64},
               {"prior", {{"n_terms", 16}}},
               {"forward", {{"obs_count", 8}}},
               {"mcmc", {{"n_steps", 500}, {"burn_in", 100}}}};
  auto wrong = tmp.path / "wrong.csv";
  write_series_csv(wrong, {1.0, 2.0}, 2, 64, 0);
  body["data_file"] = wrong.string();
  ExperimentOptions options;
  options.output_dir = (tmp.path / "out").string();
  CHECK_THROWS_AS(run_experiment(tmp.write_config(body), options), InvalidArgument);
}
