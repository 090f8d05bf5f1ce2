#pragma once

#include "mpmf/kernel.hpp"
#include "mpmf/linear_model.hpp"
#include "mpmf/measures.hpp"
#include "mpmf/moments.hpp"
#include "mpmf/mpm_baseline.hpp"
#include "mpmf/solver.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace mpmf {

/// {"mu_p": [..], "sigma_p": [[..], ..], "mu_n": .., "sigma_n": .., "p": x}
std::string moments_to_json(const ClassMoments& moments);
ClassMoments moments_from_json(std::string_view text);

enum class ModelType { Linear, Kernel, Mpm };

/// Any model the CLI can write. Only the member matching `type` is meaningful.
struct StoredModel {
  ModelType type = ModelType::Linear;
  MeasureSpec measure;
  LinearModel linear;
  KernelModel kernel;
  double alpha_star = 0.0;  // Mpm only

  Eigen::Index feature_dim() const;
  Eigen::VectorXd scores(const Eigen::MatrixXd& X) const;
};

/// `indent` < 0 gives compact single-line output.
std::string model_to_json(const StoredModel& model, int indent = -1);
StoredModel model_from_json(std::string_view text);

/// Solver outcome without the per-round trace.
std::string result_to_json(const SolverResult& result, const MeasureSpec& measure,
                           int indent = -1);

std::string read_text(const std::filesystem::path& path);
/// Writes to a sibling temporary file, then renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace mpmf
