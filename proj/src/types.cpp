#include "crowdlab/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace crowdlab {

std::string_view to_string(Elicitation e) {
  switch (e) {
    case Elicitation::Direct: return "direct";
    case Elicitation::Prediction: return "prediction";
    case Elicitation::Confidence: return "confidence";
  }
  return "direct";
}

std::optional<Elicitation> elicitation_from_string(std::string_view s) {
  if (s == "direct") return Elicitation::Direct;
  if (s == "prediction") return Elicitation::Prediction;
  if (s == "confidence") return Elicitation::Confidence;
  return std::nullopt;
}

std::string fold_case(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void validate(const Question& q) {
  if (q.id.empty()) throw InvariantViolation("question id is empty");
  if (q.options.size() < 2)
    throw InvariantViolation("question " + q.id + ": needs at least two options");
  std::set<std::string> folded;
  for (const auto& o : q.options) {
    if (o.empty()) throw InvariantViolation("question " + q.id + ": empty option label");
    if (!folded.insert(fold_case(o)).second)
      throw InvariantViolation("question " + q.id + ": options not distinct after case folding");
  }
  if (q.truth) {
    if (*q.truth < 0 || static_cast<std::size_t>(*q.truth) >= q.options.size())
      throw InvariantViolation("question " + q.id + ": truth index out of range");
  }
}

void validate(const Response& r, const Question& q) {
  if (r.question_id != q.id)
    throw InvariantViolation("response for " + r.question_id + " attached to question " + q.id);
  if (r.temperature < 0.0)
    throw InvariantViolation("response " + r.respondent_id + ": negative temperature");
  if (r.vote && (*r.vote < 0 || static_cast<std::size_t>(*r.vote) >= q.options.size()))
    throw InvariantViolation("response " + r.respondent_id + ": vote index out of range");
  if (r.confidence) {
    if (r.elicitation != Elicitation::Confidence)
      throw InvariantViolation("confidence outside a confidence elicitation");
    if (*r.confidence < 0.0 || *r.confidence > 1.0)
      throw InvariantViolation("confidence outside [0,1]");
  }
  if (r.predicted_shares) {
    if (r.elicitation != Elicitation::Prediction)
      throw InvariantViolation("predicted shares outside a prediction elicitation");
    if (r.predicted_shares->size() != q.options.size())
      throw InvariantViolation("predicted shares length != option count");
    if (!is_simplex(*r.predicted_shares))
      throw InvariantViolation("predicted shares are not a simplex");
  }
  if (r.elicitation == Elicitation::Direct && (r.confidence || r.predicted_shares))
    throw InvariantViolation("direct responses carry a vote only");
}

void validate(const Poll& p) {
  validate(p.question);
  for (const auto& r : p.responses) validate(r, p.question);
}

void validate(const SamplingConfig& c) {
  if (c.samples_per_condition < 1)
    throw InvariantViolation("samples_per_condition must be >= 1");
  if (c.temperatures.empty()) throw InvariantViolation("temperatures must be nonempty");
  for (double t : c.temperatures)
    if (t < 0.0) throw InvariantViolation("temperatures must be >= 0");
  if (c.elicitations.empty()) throw InvariantViolation("elicitations must be nonempty");
}

bool is_simplex(const std::vector<double>& shares, double tol) {
  if (shares.empty()) return false;
  double sum = 0.0;
  for (double s : shares) {
    if (!(s >= 0.0)) return false;  // also rejects NaN
    sum += s;
  }
  return std::abs(sum - 1.0) <= tol;
}

std::vector<double> vote_shares(const Poll& poll) {
  std::vector<double> counts(poll.question.options.size(), 0.0);
  std::size_t clear = 0;
  for (const auto& r : poll.responses) {
    if (!r.vote) continue;
    counts[static_cast<std::size_t>(*r.vote)] += 1.0;
    ++clear;
  }
  if (clear == 0) throw NoClearVotes("poll " + poll.question.id + " has no clear votes");
  for (double& c : counts) c /= static_cast<double>(clear);
  return counts;
}

std::vector<double> mean_predicted_shares(const Poll& poll) {
  std::vector<double> sum(poll.question.options.size(), 0.0);
  std::size_t n = 0;
  for (const auto& r : poll.responses) {
    if (!r.predicted_shares) continue;
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*r.predicted_shares)[i];
    ++n;
  }
  if (n == 0) throw NoPredictions("poll " + poll.question.id + " has no prediction responses");
  for (double& s : sum) s /= static_cast<double>(n);
  return sum;
}

Poll filter_clear(const Poll& poll) {
  Poll out;
  out.question = poll.question;
  out.condition = poll.condition;
  for (const auto& r : poll.responses)
    if (r.vote) out.responses.push_back(r);
  return out;
}

}  // namespace crowdlab
