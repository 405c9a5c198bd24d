#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sfpca/basis.hpp"
#include "sfpca/simgen.hpp"

namespace sfpca {

// INI-style config: "[section]" headers, "key = value" lines, '#' or ';'
// comments. Unknown sections or keys are errors so typos fail loudly.
using RawConfig = std::map<std::string, std::map<std::string, std::string>>;

RawConfig parse_ini(const std::string& path);
RawConfig parse_ini_text(const std::string& text, const std::string& where);

enum class ScenarioType { kLq, kClass, kCsv };
enum class Method { kSfpca, kMfpca };

// Everything a command run needs; a config plus seed pins all outputs.
struct ExperimentConfig {
  ScenarioType scenario = ScenarioType::kLq;
  LqScenario lq;            // also the base of the class scenario
  ClassScenario cls;        // kappa, weights, train/test sizes
  std::string csv_path;     // scenario = csv

  Method method = Method::kSfpca;
  double rho = 0.5;
  std::size_t s_n = 14;
  std::size_t r_n = 0;  // 0: choose by FVE
  double alpha0 = 4.0;
  double fve_level = 0.95;
  BasisKind basis = BasisKind::kOrthonormalBSpline;
  std::size_t bspline_degree = 3;
  std::optional<double> noise_variance;  // known-noise mode when set

  std::size_t replications = 1;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::size_t threads = 1;

  // tuning sweeps
  std::vector<double> tune_rhos{0.25, 0.4, 0.5, 0.6, 0.75, 0.9};
  std::vector<std::size_t> tune_sns{14};
  std::vector<std::size_t> tune_rns{5};
  std::size_t folds = 5;

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_raw(const RawConfig& raw, const std::string& where);
};

}  // namespace sfpca
