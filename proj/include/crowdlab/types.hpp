#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crowdlab/error.hpp"

namespace crowdlab {

// A vote indexes the question's ordered option list; nullopt means the
// response could not be mapped to any option (an "unclear" answer).
using Vote = std::optional<std::int32_t>;

enum class Elicitation { Direct, Prediction, Confidence };

std::string_view to_string(Elicitation e);
std::optional<Elicitation> elicitation_from_string(std::string_view s);

// One benchmark item with a finite, ordered option space.
struct Question {
  std::string id;
  std::string text;
  std::vector<std::string> options;     // length >= 2, distinct after case folding
  std::optional<std::int32_t> truth;    // index into options; absent for unresolved items
  std::string benchmark;
  std::optional<std::string> notes;
};

// Throws InvariantViolation on duplicate (case-folded) options, fewer than
// two options, or an out-of-range truth index.
void validate(const Question& q);

// One elicited sample. Direct responses carry only a vote; confidence
// responses carry vote + confidence; prediction responses carry only a
// predicted share vector.
struct Response {
  std::string question_id;
  std::string respondent_id;  // "<model>#<sample>" for harness runs
  double temperature = 0.0;
  Elicitation elicitation = Elicitation::Direct;
  Vote vote;
  std::optional<double> confidence;                      // in [0,1]
  std::optional<std::vector<double>> predicted_shares;   // simplex over options
  std::optional<std::string> raw_text;
};

void validate(const Response& r, const Question& q);

struct Condition {
  std::optional<double> temperature;  // absent for pooled-temperature polls
  std::vector<std::string> models;
  std::vector<Elicitation> elicitations;
};

// Every response gathered for one question under one condition.
struct Poll {
  Question question;
  std::vector<Response> responses;
  Condition condition;
};

void validate(const Poll& p);

struct SamplingConfig {
  std::vector<double> temperatures{0.7, 1.0};
  int samples_per_condition = 25;
  std::vector<Elicitation> elicitations{Elicitation::Direct, Elicitation::Prediction,
                                        Elicitation::Confidence};
};

void validate(const SamplingConfig& c);

// ASCII case fold, used wherever option labels are compared.
std::string fold_case(std::string_view s);

bool is_simplex(const std::vector<double>& shares, double tol = 1e-9);

// Fraction of clear votes per option; unclear responses are excluded from
// the denominator. Throws NoClearVotes when every vote is unclear.
std::vector<double> vote_shares(const Poll& poll);

// Arithmetic mean of predicted_shares across prediction responses.
// Throws NoPredictions when no response carries predictions.
std::vector<double> mean_predicted_shares(const Poll& poll);

// Copy of the poll keeping only responses with a clear vote.
Poll filter_clear(const Poll& poll);

}  // namespace crowdlab
