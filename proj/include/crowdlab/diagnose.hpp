#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crowdlab/diagnostics.hpp"
#include "crowdlab/response_log.hpp"

#include <nlohmann/json_fwd.hpp>

namespace crowdlab {

struct DiagnoseOptions {
  int bootstrap_resamples = kDefaultBootstrapResamples;
  std::uint64_t bootstrap_seed = kDefaultBootstrapSeed;
  double ci_level = 0.95;
  int calibration_bins = kDefaultCalibrationBins;
  // Raters default to (model, temperature) pairs, id "model@T"; pooling
  // collapses models so a rater is a temperature.
  bool pool_models = false;
  PredictionWeighting prediction_weighting = PredictionWeighting::OwnVote;
};

struct MethodAccuracy {
  double point = 0.0;
  double low = 0.0;
  double high = 0.0;
  std::size_t n_questions = 0;
};

// Square matrix over named raters; NaN entries are undefined statistics and
// serialize as null.
struct RaterMatrix {
  std::vector<std::string> raters;
  std::vector<std::vector<double>> values;
};

// Accuracy block for one crowd: a single model or the pooled ensemble at one
// temperature. Methods that could not run are listed with their error code.
struct CrowdAccuracy {
  std::string model;  // model name or "ensemble"
  double temperature = 0.0;
  std::map<Method, MethodAccuracy> by_method;
  std::map<Method, std::string> unavailable;
};

struct BenchmarkDiagnostics {
  std::string benchmark;
  std::vector<CrowdAccuracy> crowds;
  RaterMatrix kappa;  // pairwise Cohen's kappa over rater pluralities
  std::optional<double> fleiss;
  std::vector<std::pair<std::string, double>> entropy_by_question;  // bits, pooled votes
  std::optional<double> flip_rate;  // only with a paired second-temperature log
  std::optional<ErrorConcentration> error_conc;  // mean per-question concentration
  RaterMatrix truth_correlations;  // raters plus final "Truth" row, binary benchmarks only
  std::optional<Calibration> calibration;
  ConsensusCurves curves;
};

struct DiagnosticsReport {
  std::vector<BenchmarkDiagnostics> benchmarks;
  std::uint64_t bootstrap_seed = kDefaultBootstrapSeed;
  int bootstrap_resamples = kDefaultBootstrapResamples;
};

DiagnosticsReport build_diagnostics(const std::vector<LogRecord>& records,
                                    const std::vector<LogRecord>* paired_records,
                                    const DiagnoseOptions& options);

nlohmann::json diagnostics_to_json(const DiagnosticsReport& report);
DiagnosticsReport diagnostics_from_json(const nlohmann::json& j);

}  // namespace crowdlab
