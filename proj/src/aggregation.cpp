#include "crowdlab/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace crowdlab {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Majority: return "majority";
    case Method::HighestConfidence: return "highest_confidence";
    case Method::ConfidenceWeighted: return "confidence_weighted";
    case Method::PredictionWeighted: return "prediction_weighted";
    case Method::SurprisinglyPopular: return "surprisingly_popular";
    case Method::InverseSp: return "inverse_sp";
  }
  return "majority";
}

std::optional<Method> method_from_string(std::string_view s) {
  for (Method m : kAllMethods)
    if (to_string(m) == s) return m;
  return std::nullopt;
}

namespace {

// Argmax with the second-option tie rule: among tied maxima prefer index 1,
// else the lowest tied index. Exact float equality is intentional; scores
// are sums of identically derived terms, so true ties compare equal.
std::int32_t argmax_tie_second(const std::vector<double>& scores, bool* tie_broken) {
  const double best = *std::max_element(scores.begin(), scores.end());
  std::vector<std::int32_t> tied;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] == best) tied.push_back(static_cast<std::int32_t>(i));
  if (tie_broken) *tie_broken = tied.size() > 1;
  if (tied.size() > 1 && std::find(tied.begin(), tied.end(), 1) != tied.end()) return 1;
  return tied.front();
}

AggregateDecision make_decision(const Poll& poll, Method method, std::vector<double> scores) {
  AggregateDecision d;
  d.question_id = poll.question.id;
  d.method = method;
  d.scores = std::move(scores);
  d.chosen = argmax_tie_second(d.scores, &d.tie_broken);
  return d;
}

// Mean predicted share per option, or empty when the poll has none.
std::vector<double> predictions_or_empty(const Poll& poll) {
  for (const auto& r : poll.responses)
    if (r.predicted_shares) return mean_predicted_shares(poll);
  return {};
}

}  // namespace

std::int32_t plurality_choice(const Poll& poll, bool* tie_broken) {
  std::vector<double> counts(poll.question.options.size(), 0.0);
  std::size_t clear = 0;
  for (const auto& r : poll.responses) {
    if (!r.vote) continue;
    counts[static_cast<std::size_t>(*r.vote)] += 1.0;
    ++clear;
  }
  if (clear == 0) throw NoClearVotes("poll " + poll.question.id + " has no clear votes");
  return argmax_tie_second(counts, tie_broken);
}

AggregateDecision majority_vote(const Poll& poll) {
  std::vector<double> counts(poll.question.options.size(), 0.0);
  std::size_t clear = 0;
  for (const auto& r : poll.responses) {
    if (!r.vote) continue;
    counts[static_cast<std::size_t>(*r.vote)] += 1.0;
    ++clear;
  }
  if (clear == 0) throw NoClearVotes("poll " + poll.question.id + " has no clear votes");
  return make_decision(poll, Method::Majority, std::move(counts));
}

AggregateDecision highest_confidence(const Poll& poll) {
  // Per-option maximum confidence; the winner is the vote of the single most
  // confident response. Responses tied at the global maximum resolve by
  // majority among themselves, then the usual tie rule.
  const std::size_t k = poll.question.options.size();
  std::vector<double> max_conf(k, 0.0);
  double global_max = -1.0;
  for (const auto& r : poll.responses) {
    if (!r.vote || !r.confidence) continue;
    const auto o = static_cast<std::size_t>(*r.vote);
    max_conf[o] = std::max(max_conf[o], *r.confidence);
    global_max = std::max(global_max, *r.confidence);
  }
  if (global_max < 0.0)
    throw NoConfidences("poll " + poll.question.id + " has no voted responses with confidence");

  std::vector<double> top_votes(k, 0.0);
  for (const auto& r : poll.responses) {
    if (!r.vote || !r.confidence) continue;
    if (*r.confidence == global_max) top_votes[static_cast<std::size_t>(*r.vote)] += 1.0;
  }

  AggregateDecision d;
  d.question_id = poll.question.id;
  d.method = Method::HighestConfidence;
  d.scores = std::move(max_conf);
  d.chosen = argmax_tie_second(top_votes, &d.tie_broken);
  return d;
}

AggregateDecision confidence_weighted(const Poll& poll) {
  std::vector<double> weights(poll.question.options.size(), 0.0);
  bool any = false;
  for (const auto& r : poll.responses) {
    if (!r.vote || !r.confidence) continue;
    weights[static_cast<std::size_t>(*r.vote)] += *r.confidence;
    any = true;
  }
  if (!any)
    throw NoConfidences("poll " + poll.question.id + " has no voted responses with confidence");
  return make_decision(poll, Method::ConfidenceWeighted, std::move(weights));
}

AggregateDecision prediction_weighted(const Poll& poll, PredictionWeighting weighting) {
  const std::vector<double> mean_pred = predictions_or_empty(poll);
  if (mean_pred.empty())
    throw NoPredictions("poll " + poll.question.id + " has no prediction responses");

  // Predictions keyed by respondent id pair with that respondent's vote.
  std::map<std::string, const std::vector<double>*> by_respondent;
  for (const auto& r : poll.responses)
    if (r.predicted_shares) by_respondent.emplace(r.respondent_id, &*r.predicted_shares);

  std::vector<double> weights(poll.question.options.size(), 0.0);
  bool any_vote = false;
  for (const auto& r : poll.responses) {
    if (!r.vote) continue;
    any_vote = true;
    const auto chosen = static_cast<std::size_t>(*r.vote);
    const auto it = by_respondent.find(r.respondent_id);
    const std::vector<double>& shares = it != by_respondent.end() ? *it->second : mean_pred;
    const std::size_t weight_index = weighting == PredictionWeighting::OwnVote ? chosen : 0;
    weights[chosen] += shares[weight_index];
  }
  if (!any_vote) throw NoClearVotes("poll " + poll.question.id + " has no clear votes");
  return make_decision(poll, Method::PredictionWeighted, std::move(weights));
}

AggregateDecision surprisingly_popular(const Poll& poll) {
  const std::vector<double> predicted = predictions_or_empty(poll);
  if (predicted.empty())
    throw NoPredictions("poll " + poll.question.id + " has no prediction responses");
  const std::vector<double> observed = vote_shares(poll);

  std::vector<double> gaps(observed.size());
  for (std::size_t i = 0; i < gaps.size(); ++i) gaps[i] = observed[i] - predicted[i];

  if (gaps.size() == 2) {
    // The binary rule compares shares directly: first option iff observed
    // exceeds predicted, second otherwise, equality counting as a tie.
    AggregateDecision d;
    d.question_id = poll.question.id;
    d.method = Method::SurprisinglyPopular;
    d.chosen = observed[0] > predicted[0] ? 0 : 1;
    d.tie_broken = observed[0] == predicted[0];
    d.scores = std::move(gaps);
    return d;
  }
  return make_decision(poll, Method::SurprisinglyPopular, std::move(gaps));
}

AggregateDecision inverse_sp(const Poll& poll) {
  AggregateDecision sp = surprisingly_popular(poll);

  AggregateDecision d;
  d.question_id = poll.question.id;
  d.method = Method::InverseSp;
  d.scores.resize(sp.scores.size());
  for (std::size_t i = 0; i < sp.scores.size(); ++i) d.scores[i] = -sp.scores[i];

  if (sp.scores.size() == 2) {
    // Strict complement, including through ties.
    d.chosen = sp.chosen == 0 ? 1 : 0;
    d.tie_broken = sp.tie_broken;
  } else {
    d.chosen = argmax_tie_second(d.scores, &d.tie_broken);
  }
  return d;
}

std::vector<MethodOutcome> aggregate_all(const Poll& poll, PredictionWeighting weighting) {
  std::vector<MethodOutcome> out;
  for (Method m : kAllMethods) {
    MethodOutcome o;
    o.method = m;
    try {
      switch (m) {
        case Method::Majority: o.decision = majority_vote(poll); break;
        case Method::HighestConfidence: o.decision = highest_confidence(poll); break;
        case Method::ConfidenceWeighted: o.decision = confidence_weighted(poll); break;
        case Method::PredictionWeighted: o.decision = prediction_weighted(poll, weighting); break;
        case Method::SurprisinglyPopular: o.decision = surprisingly_popular(poll); break;
        case Method::InverseSp: o.decision = inverse_sp(poll); break;
      }
    } catch (const Error& e) {
      o.error = e.code();
    }
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace crowdlab
