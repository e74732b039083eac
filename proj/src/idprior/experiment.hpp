#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace idprior {

// Overrides supplied on the command line; absent values fall back to the
// config file, then to built-in defaults. The IDPRIOR_OUT_ROOT environment
// variable supplies the default output root when neither is set.
struct ExperimentOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  bool reference = false;  // deterministic single-threaded mode
};

// Schema-validates a config file without touching the RNG or writing output.
// Returns a human-readable report of resolved defaults; throws
// InvalidArgument on schema violations.
std::string validate_config(const std::filesystem::path& config_path);

// Executes the configured experiment: writes manifest.json (incomplete first,
// finalized on exit), numeric CSVs and summary.json into the output
// directory. Throws InvalidArgument on bad configs and NumericError on
// numerical diagnostic failures.
void run_experiment(const std::filesystem::path& config_path, const ExperimentOptions& options);

// Writes the synthetic-data triple (truth field, clean forward output, noisy
// data) for the configured problem.
void make_synthetic(const std::filesystem::path& config_path, const ExperimentOptions& options);

}  // namespace idprior
