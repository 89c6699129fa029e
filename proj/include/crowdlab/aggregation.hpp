#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crowdlab/types.hpp"

namespace crowdlab {

enum class Method {
  Majority,
  HighestConfidence,
  ConfidenceWeighted,
  PredictionWeighted,
  SurprisinglyPopular,
  InverseSp,
};

inline constexpr Method kAllMethods[] = {
    Method::Majority,           Method::HighestConfidence,  Method::ConfidenceWeighted,
    Method::PredictionWeighted, Method::SurprisinglyPopular, Method::InverseSp,
};

std::string_view to_string(Method m);
std::optional<Method> method_from_string(std::string_view s);

// How prediction_weighted turns a predicted share vector into a vote weight.
// OwnVote: the voter's predicted share of the option it voted for (default).
// Canonical: the voter's predicted share of the first option, regardless of
// its vote.
enum class PredictionWeighting { OwnVote, Canonical };

// Outcome of one aggregation rule on one poll. `scores` is per option and
// method-specific: vote counts (Majority), max confidence per option
// (HighestConfidence), summed weights (ConfidenceWeighted,
// PredictionWeighted), surprise gaps v - p (SurprisinglyPopular), negated
// surprise gaps (InverseSp). `tie_broken` is set whenever the second-option
// tie rule decided the outcome.
struct AggregateDecision {
  std::string question_id;
  Method method = Method::Majority;
  std::int32_t chosen = 0;
  std::vector<double> scores;
  bool tie_broken = false;
};

// Most clear votes wins; exact ties fall to the second option.
AggregateDecision majority_vote(const Poll& poll);

// The vote of the single most confident response; several responses tied at
// the maximum confidence vote among themselves by majority, residual ties
// fall to the second option.
AggregateDecision highest_confidence(const Poll& poll);

// Each vote weighted by its own reported confidence.
AggregateDecision confidence_weighted(const Poll& poll);

// Each vote weighted by the voter's predicted popularity of its own answer.
// Votes pair with predictions by respondent id; unpaired votes fall back to
// the poll-mean predicted share of the option they voted for.
AggregateDecision prediction_weighted(const Poll& poll,
                                      PredictionWeighting weighting = PredictionWeighting::OwnVote);

// Picks the option whose observed vote share most exceeds its mean predicted
// share. Binary polls select the first option iff observed > predicted, the
// second otherwise (equality counts as a tie and falls to the second).
AggregateDecision surprisingly_popular(const Poll& poll);

// Diagnostic complement of surprisingly_popular: binary polls pick the option
// SP did not; with more options, the smallest surprise gap wins.
AggregateDecision inverse_sp(const Poll& poll);

// A rule that could not run (e.g. no predictions in the poll) reports its
// error code instead of a decision.
struct MethodOutcome {
  Method method = Method::Majority;
  std::optional<AggregateDecision> decision;
  std::string error;  // empty on success
};

std::vector<MethodOutcome> aggregate_all(const Poll& poll,
                                         PredictionWeighting weighting = PredictionWeighting::OwnVote);

// Tie-broken plurality option of the poll's clear votes. Shared by majority
// voting, flip-rate bookkeeping, and the consensus curves.
std::int32_t plurality_choice(const Poll& poll, bool* tie_broken = nullptr);

}  // namespace crowdlab
