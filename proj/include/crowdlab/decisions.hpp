#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crowdlab/aggregation.hpp"
#include "crowdlab/response_log.hpp"

namespace crowdlab {

// One serialized aggregation outcome: a (question, crowd, method) cell.
// `error` is set instead of the decision fields when the method could not
// run on that poll. `correct` is present when the question has a truth
// label.
struct DecisionRecord {
  std::string question_id;
  std::string benchmark;
  std::string model;  // model name or "ensemble"
  double temperature = 0.0;
  Method method = Method::Majority;
  std::optional<std::string> chosen_label;
  std::vector<double> scores;
  bool tie_broken = false;
  std::optional<bool> correct;
  std::optional<std::string> error;
};

// Runs all six methods over every per-model poll plus the pooled ensemble
// polls (when more than one model is present). Pure function of the records;
// output order is canonical.
std::vector<DecisionRecord> decide_all(const std::vector<LogRecord>& records,
                                       PredictionWeighting weighting = PredictionWeighting::OwnVote);

void write_decisions(const std::string& path, const std::vector<DecisionRecord>& decisions);
std::vector<DecisionRecord> read_decisions(const std::string& path);

}  // namespace crowdlab
