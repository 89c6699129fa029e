#include "crowdlab/simulation.hpp"

#include <cmath>
#include <string>

#include "crowdlab/rng.hpp"

namespace crowdlab {

namespace {

// Substream keys reserved for question-level draws (truth placement, crowd
// signal, item attractor). Respondent indexes never reach this range.
constexpr std::uint64_t kQuestionStream = 0xFFFFFFFFFFFFFF01ULL;

Question binary_question(const std::string& id, const std::string& benchmark) {
  Question q;
  q.id = id;
  q.text = id;
  q.options = {"YES", "NO"};
  q.truth = 1;
  q.benchmark = benchmark;
  return q;
}

Response direct_vote(const Question& q, int respondent, Vote vote) {
  Response r;
  r.question_id = q.id;
  r.respondent_id = "sim#" + std::to_string(respondent);
  r.temperature = 0.0;
  r.elicitation = Elicitation::Direct;
  r.vote = vote;
  return r;
}

Response prediction(const Question& q, int respondent, double canonical_share) {
  Response r;
  r.question_id = q.id;
  r.respondent_id = "sim#" + std::to_string(respondent);
  r.temperature = 0.0;
  r.elicitation = Elicitation::Prediction;
  r.predicted_shares = std::vector<double>{canonical_share, 1.0 - canonical_share};
  return r;
}

int categorical(SubstreamRng& rng, const std::vector<double>& weights) {
  const double u = rng.next_unit();
  double cum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cum += weights[i];
    if (u < cum) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

}  // namespace

std::vector<Poll> simulate_prelec(const PrelecParams& params, int n_respondents,
                                  int n_questions, std::uint64_t seed) {
  if (n_respondents < 1) throw InvariantViolation("need at least one respondent");
  if (n_questions < 1) throw InvariantViolation("need at least one question");
  for (double p : {params.informed_fraction, params.informed_prediction,
                   params.uninformed_prediction})
    if (p < 0.0 || p > 1.0) throw InvariantViolation("prelec parameters must be in [0,1]");

  const auto exact_informed =
      static_cast<int>(std::llround(params.informed_fraction * n_respondents));

  std::vector<Poll> polls;
  polls.reserve(static_cast<std::size_t>(n_questions));
  for (int qi = 0; qi < n_questions; ++qi) {
    Question question = binary_question("prelec-" + std::to_string(qi), "prelec");
    SubstreamRng qrng(seed, static_cast<std::uint64_t>(qi), kQuestionStream);
    const std::int32_t truth = params.randomize_truth ? (qrng.bernoulli(0.5) ? 0 : 1) : 1;
    question.truth = truth;
    const std::int32_t wrong = 1 - truth;

    // Group forecasts are shares of the wrong (majority) option; convert to
    // canonical first-option shares.
    const double informed_canonical =
        wrong == 0 ? params.informed_prediction : 1.0 - params.informed_prediction;
    const double uninformed_canonical =
        wrong == 0 ? params.uninformed_prediction : 1.0 - params.uninformed_prediction;

    Poll poll;
    poll.condition.temperature = 0.0;
    poll.condition.models = {"synthetic"};
    poll.condition.elicitations = {Elicitation::Direct, Elicitation::Prediction};

    int informed_count = 0;
    for (int r = 0; r < n_respondents; ++r) {
      SubstreamRng rng(seed, static_cast<std::uint64_t>(qi), static_cast<std::uint64_t>(r));
      const bool informed = params.composition == Composition::Exact
                                ? r < exact_informed
                                : rng.bernoulli(params.informed_fraction);
      if (informed) ++informed_count;

      Vote vote;
      if (informed) {
        vote = truth;
      } else if (params.deterministic_votes) {
        vote = wrong;
      } else {
        vote = rng.bernoulli(params.uninformed_prediction) ? wrong : truth;
      }
      poll.responses.push_back(direct_vote(question, r, vote));
      poll.responses.push_back(
          prediction(question, r, informed ? informed_canonical : uninformed_canonical));
    }
    if (informed_count == 0) question.notes = "pure-guessing";
    for (auto& resp : poll.responses) resp.question_id = question.id;
    poll.question = question;
    polls.push_back(std::move(poll));
  }
  return polls;
}

std::vector<Poll> simulate_correlated_crowd(const CorrelatedCrowdParams& params,
                                            int n_questions, std::uint64_t seed) {
  if (params.respondents < 1) throw InvariantViolation("need at least one respondent");
  if (!(params.independent_accuracy > 0.0 && params.independent_accuracy < 1.0))
    throw InvariantViolation("independent_accuracy must be in (0,1)");
  if (params.coupling < 0.0 || params.coupling > 1.0)
    throw InvariantViolation("coupling must be in [0,1]");
  if (params.attractor_wrong_prob < 0.0 || params.attractor_wrong_prob > 1.0)
    throw InvariantViolation("attractor_wrong_prob must be in [0,1]");

  std::vector<Poll> polls;
  polls.reserve(static_cast<std::size_t>(n_questions));
  for (int qi = 0; qi < n_questions; ++qi) {
    Question question = binary_question("corr-" + std::to_string(qi), "correlated");
    const std::int32_t truth = *question.truth;
    const std::int32_t wrong = 1 - truth;  // the lexicographically first non-truth option

    SubstreamRng qrng(seed, static_cast<std::uint64_t>(qi), kQuestionStream);
    const std::int32_t signal =
        qrng.bernoulli(params.attractor_wrong_prob) ? wrong : truth;

    Poll poll;
    poll.question = question;
    poll.condition.temperature = 0.0;
    poll.condition.models = {"synthetic"};
    poll.condition.elicitations = {Elicitation::Direct};
    for (int r = 0; r < params.respondents; ++r) {
      SubstreamRng rng(seed, static_cast<std::uint64_t>(qi), static_cast<std::uint64_t>(r));
      Vote vote;
      if (rng.bernoulli(params.coupling)) {
        vote = signal;
      } else {
        vote = rng.bernoulli(params.independent_accuracy) ? truth : wrong;
      }
      poll.responses.push_back(direct_vote(question, r, vote));
    }
    polls.push_back(std::move(poll));
  }
  return polls;
}

std::vector<std::vector<Vote>> simulate_null_control(const NullControlParams& params,
                                                     std::uint64_t seed) {
  if (params.option_count < 2) throw InvariantViolation("need at least two options");
  if (params.items < 1) throw InvariantViolation("need at least one item");
  if (params.follow_probs.empty()) throw InvariantViolation("no respondents configured");
  for (double lambda : params.follow_probs)
    if (lambda < 0.0 || lambda > 1.0) throw InvariantViolation("follow_prob must be in [0,1]");
  if (!params.biases.empty() && params.biases.size() != params.follow_probs.size())
    throw InvariantViolation("biases must match respondent count when given");
  for (const auto& bias : params.biases) {
    if (bias.size() != static_cast<std::size_t>(params.option_count) || !is_simplex(bias))
      throw InvariantViolation("bias is not a simplex over the options");
  }

  const std::size_t raters = params.follow_probs.size();
  std::vector<std::vector<Vote>> ratings(
      raters, std::vector<Vote>(static_cast<std::size_t>(params.items)));

  for (int item = 0; item < params.items; ++item) {
    SubstreamRng qrng(seed, static_cast<std::uint64_t>(item), kQuestionStream);
    const auto attractor =
        static_cast<int>(qrng.next_below(static_cast<std::uint64_t>(params.option_count)));
    for (std::size_t r = 0; r < raters; ++r) {
      SubstreamRng rng(seed, static_cast<std::uint64_t>(item), static_cast<std::uint64_t>(r));
      int choice;
      if (rng.bernoulli(params.follow_probs[r])) {
        choice = attractor;
      } else if (params.biases.empty()) {
        choice = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(params.option_count)));
      } else {
        choice = categorical(rng, params.biases[r]);
      }
      ratings[r][static_cast<std::size_t>(item)] = choice;
    }
  }
  return ratings;
}

std::vector<double> condorcet_curve(double p, const std::vector<int>& sizes) {
  if (!(p > 0.0 && p < 1.0)) throw InvariantViolation("p must be in (0,1)");
  std::vector<double> out;
  out.reserve(sizes.size());
  for (int n : sizes) {
    if (n < 1) throw InvariantViolation("crowd sizes must be positive");
    if (n % 2 == 0) throw EvenSize("crowd size " + std::to_string(n) + " is even");
    double tail = 0.0;
    for (int k = n / 2 + 1; k <= n; ++k) {
      const double log_term = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                              std::lgamma(n - k + 1.0) + k * std::log(p) +
                              (n - k) * std::log1p(-p);
      tail += std::exp(log_term);
    }
    out.push_back(tail);
  }
  return out;
}

std::vector<Question> random_string_questions(int count, std::uint64_t seed) {
  if (count < 1) throw InvariantViolation("need at least one question");
  std::vector<Question> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    SubstreamRng rng(seed, static_cast<std::uint64_t>(i), kQuestionStream);
    std::string text;
    text.reserve(32);
    for (int c = 0; c < 32; ++c)
      text += static_cast<char>('!' + rng.next_below(94));  // printable, no space
    Question q;
    q.id = "rs-" + std::to_string(i);
    q.text = std::move(text);
    q.options = {"A", "B", "C", "D"};
    q.benchmark = "random-strings";
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace crowdlab
