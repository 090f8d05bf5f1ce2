#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mpmf::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kDataMismatch = 3, kSolverFailure = 4 };

/// Everything a command needs, resolved from flags and the optional
/// key=value config file (flags win).
struct RunConfig {
  std::string command;
  std::string data;
  std::vector<std::string> bench_data;
  std::string test;
  std::string validation;
  std::string moments;
  std::string model;
  std::string format = "auto";  // auto | libsvm | csv
  std::size_t label_column = 0;
  std::optional<int> positive_label;
  std::string measure;  // empty: f1 for training, the model's own for evaluate
  double beta = 1.0;
  std::string measures = "am,f1";  // bench
  std::string kernel = "none";
  std::optional<double> gamma;
  std::size_t subsample = 200;
  std::uint64_t seed = 0;
  std::optional<int> grid_points;
  std::optional<double> grid_step;
  std::optional<int> max_rounds;
  std::optional<double> train_fraction;
  double jitter = 1e-8;
  std::string method = "mpmf";
  bool one_vs_all = false;
  bool tune_bias = false;
  int repeats = 3;
  std::string out = ".";
  bool pretty = false;
};

/// Runs `mpmf <args...>` in-process. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mpmf::cli
