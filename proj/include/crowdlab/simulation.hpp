#pragma once

#include <cstdint>
#include <vector>

#include "crowdlab/types.hpp"

namespace crowdlab {

enum class Composition {
  Exact,       // round(alpha * n) respondents informed, deterministically
  Stochastic,  // each respondent informed with probability alpha
};

// Expert-minority crowd. Truth sits on the second option; the uninformed
// majority votes the first option. Predictions are the canonical
// (first-option) share each group forecasts.
struct PrelecParams {
  double informed_fraction = 0.2;
  double informed_prediction = 0.80;    // forecast by respondents who know the answer
  double uninformed_prediction = 0.95;  // forecast by respondents who don't
  Composition composition = Composition::Exact;
  // When true, informed respondents always vote the truth and uninformed
  // always vote the first option. When false, informed still vote the truth
  // but uninformed vote the first option only with probability
  // uninformed_prediction (their prediction doubles as belief strength).
  bool deterministic_votes = true;
  // Truth stays on the second option by default; set to draw it uniformly
  // per question instead (predictions flip accordingly).
  bool randomize_truth = false;
};

std::vector<Poll> simulate_prelec(const PrelecParams& params, int n_respondents,
                                  int n_questions, std::uint64_t seed);

// Crowd with a shared per-question signal. The signal is the truth with
// probability 1 - attractor_wrong_prob, else the fixed wrong option. Each
// respondent copies the signal with probability `coupling`, otherwise votes
// the truth with probability `independent_accuracy` on its own.
struct CorrelatedCrowdParams {
  int respondents = 125;
  double independent_accuracy = 0.6;  // p in (0,1)
  double coupling = 0.0;              // rho in [0,1]
  double attractor_wrong_prob = 0.0;  // q in [0,1]
};

std::vector<Poll> simulate_correlated_crowd(const CorrelatedCrowdParams& params,
                                            int n_questions, std::uint64_t seed);

// Forced-choice raters with no ground truth. Every item has a latent
// attractor option (uniform per item); rater r follows it with probability
// follow_probs[r], otherwise draws from its own bias simplex. Respondent
// count is follow_probs.size(); biases may be empty for uniform.
struct NullControlParams {
  int option_count = 4;
  int items = 10000;
  std::vector<double> follow_probs;
  std::vector<std::vector<double>> biases;
};

// ratings[r][i] = rater r's option index on item i (always clear).
std::vector<std::vector<Vote>> simulate_null_control(const NullControlParams& params,
                                                     std::uint64_t seed);

// Expected majority accuracy of n independent voters each correct with
// probability p, for each n in `sizes`. Sizes must be odd so the analytic
// binomial form is tie-free.
std::vector<double> condorcet_curve(double p, const std::vector<int>& sizes);

// Control questions: uniformly random 32-character printable sequences with
// options A-D and no truth label.
std::vector<Question> random_string_questions(int count, std::uint64_t seed);

}  // namespace crowdlab
