#include "crowdlab/decisions.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

#include "crowdlab/json_util.hpp"

namespace crowdlab {

namespace {

nlohmann::json decision_to_json(const DecisionRecord& d) {
  nlohmann::json j;
  j["question_id"] = d.question_id;
  j["benchmark"] = d.benchmark;
  j["model"] = d.model;
  j["temperature"] = d.temperature;
  j["method"] = to_string(d.method);
  j["chosen_label"] = d.chosen_label ? nlohmann::json(*d.chosen_label) : nlohmann::json(nullptr);
  j["scores"] = d.scores;
  j["tie_broken"] = d.tie_broken;
  j["correct"] = d.correct ? nlohmann::json(*d.correct) : nlohmann::json(nullptr);
  j["error"] = d.error ? nlohmann::json(*d.error) : nlohmann::json(nullptr);
  return j;
}

DecisionRecord decision_from_json(const nlohmann::json& j) {
  DecisionRecord d;
  d.question_id = j.at("question_id").get<std::string>();
  d.benchmark = j.at("benchmark").get<std::string>();
  d.model = j.at("model").get<std::string>();
  d.temperature = j.at("temperature").get<double>();
  const auto m = method_from_string(j.at("method").get<std::string>());
  if (!m) throw ParseError("unknown method: " + j.at("method").dump());
  d.method = *m;
  if (!j.at("chosen_label").is_null()) d.chosen_label = j.at("chosen_label").get<std::string>();
  d.scores = j.at("scores").get<std::vector<double>>();
  d.tie_broken = j.at("tie_broken").get<bool>();
  if (!j.at("correct").is_null()) d.correct = j.at("correct").get<bool>();
  if (!j.at("error").is_null()) d.error = j.at("error").get<std::string>();
  return d;
}

void decide_polls(const std::vector<Poll>& polls, const std::string& model,
                  PredictionWeighting weighting, std::vector<DecisionRecord>* out) {
  for (const Poll& poll : polls) {
    for (const MethodOutcome& outcome : aggregate_all(poll, weighting)) {
      DecisionRecord d;
      d.question_id = poll.question.id;
      d.benchmark = poll.question.benchmark;
      d.model = model;
      d.temperature = poll.condition.temperature.value_or(0.0);
      d.method = outcome.method;
      if (outcome.decision) {
        const auto& dec = *outcome.decision;
        d.chosen_label = poll.question.options[static_cast<std::size_t>(dec.chosen)];
        d.scores = dec.scores;
        d.tie_broken = dec.tie_broken;
        if (poll.question.truth) d.correct = dec.chosen == *poll.question.truth;
      } else {
        d.error = outcome.error;
      }
      out->push_back(std::move(d));
    }
  }
}

}  // namespace

std::vector<DecisionRecord> decide_all(const std::vector<LogRecord>& records,
                                       PredictionWeighting weighting) {
  std::vector<DecisionRecord> out;

  std::vector<Poll> per_model = polls_from_log(records, Grouping::PerModel);
  for (const Poll& poll : per_model) decide_polls({poll}, poll.condition.models.front(), weighting, &out);

  // The pooled ensemble only exists when several models are in the log.
  std::vector<Poll> ensemble = polls_from_log(records, Grouping::Ensemble);
  for (const Poll& poll : ensemble)
    if (poll.condition.models.size() > 1) decide_polls({poll}, "ensemble", weighting, &out);

  return out;
}

void write_decisions(const std::string& path, const std::vector<DecisionRecord>& decisions) {
  std::ostringstream out;
  for (const auto& d : decisions) out << decision_to_json(d).dump() << '\n';
  write_file(path, out.str());
}

std::vector<DecisionRecord> read_decisions(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<DecisionRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(decision_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace crowdlab
