#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "idprior.h"

namespace {

int to_exit_code(idp_status status) {
  switch (status) {
    case IDP_OK:
      return 0;
    case IDP_ERR_INVALID_ARGUMENT:
      return 2;
    case IDP_ERR_NUMERIC:
      return 3;
    default:
      return 1;
  }
}

int report_failure(idp_status status) {
  std::fprintf(stderr, "error: %s\n", idp_last_error());
  return to_exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shrinkage and jump prior experiments"};
  app.require_subcommand(1);

  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  bool reference = false;

  auto add_common = [&](CLI::App* sub, bool with_run_flags) {
    sub->add_option("config", config, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "override the config seed")
        ->each([&](const std::string&) { seed_set = true; });
    sub->add_option("--out", out, "override the output directory");
    if (with_run_flags)
      sub->add_flag("--reference", reference, "deterministic single-threaded mode");
  };

  CLI::App* run = app.add_subcommand("run", "run the configured experiment");
  add_common(run, true);
  CLI::App* validate = app.add_subcommand("validate", "check a config without running");
  add_common(validate, false);
  CLI::App* synth = app.add_subcommand("make-synthetic", "write truth/clean/data CSVs");
  add_common(synth, false);

  CLI11_PARSE(app, argc, argv);

  const std::uint64_t* seed_ptr = seed_set ? &seed : nullptr;
  const char* out_ptr = out.empty() ? nullptr : out.c_str();

  if (run->parsed()) {
    idp_status status = idp_run(config.c_str(), seed_ptr, out_ptr, reference ? 1 : 0);
    if (status != IDP_OK) return report_failure(status);
    std::printf("ok\n");
    return 0;
  }
  if (validate->parsed()) {
    std::vector<char> report(1 << 14);
    idp_status status = idp_validate(config.c_str(), report.data(), report.size());
    if (status != IDP_OK) return report_failure(status);
    std::fputs(report.data(), stdout);
    return 0;
  }
  idp_status status = idp_make_synthetic(config.c_str(), seed_ptr, out_ptr);
  if (status != IDP_OK) return report_failure(status);
  std::printf("ok\n");
  return 0;
}
