#include <doctest.h>

#include <cmath>
#include <map>

#include "crowdlab/aggregation.hpp"
#include "crowdlab/diagnostics.hpp"
#include "crowdlab/simulation.hpp"
#include "support/oracles.hpp"

using namespace crowdlab;
using namespace crowdlab::testing;

namespace {

double majority_accuracy(const std::vector<Poll>& polls) {
  int correct = 0;
  for (const Poll& p : polls)
    if (majority_vote(p).chosen == *p.question.truth) ++correct;
  return static_cast<double>(correct) / static_cast<double>(polls.size());
}

double sp_accuracy(const std::vector<Poll>& polls) {
  int correct = 0;
  for (const Poll& p : polls)
    if (surprisingly_popular(p).chosen == *p.question.truth) ++correct;
  return static_cast<double>(correct) / static_cast<double>(polls.size());
}

}  // namespace

TEST_CASE("simulate_prelec closed form, exact composition") {
  PrelecParams params;  // defaults: alpha 0.2, predictions 0.80/0.95
  auto polls = simulate_prelec(params, 100, 20, 1);
  REQUIRE(polls.size() == 20);
  for (const Poll& p : polls) {
    CHECK(*p.question.truth == 1);
    auto v = vote_shares(p);
    CHECK(v[0] == doctest::Approx(0.80).epsilon(1e-12));
    auto pred = mean_predicted_shares(p);
    CHECK(pred[0] == doctest::Approx(0.92).epsilon(1e-12));
    CHECK(surprisingly_popular(p).chosen == 1);
    CHECK(majority_vote(p).chosen == 0);
  }
}

TEST_CASE("simulate_prelec edge fractions") {
  SUBCASE("everyone informed means the majority is right") {
    PrelecParams params;
    params.informed_fraction = 1.0;
    auto polls = simulate_prelec(params, 50, 5, 2);
    for (const Poll& p : polls) {
      CHECK(vote_shares(p)[1] == 1.0);
      CHECK(majority_vote(p).chosen == 1);
    }
  }
  SUBCASE("nobody informed is flagged as pure guessing") {
    PrelecParams params;
    params.informed_fraction = 0.0;
    auto polls = simulate_prelec(params, 50, 5, 3);
    for (const Poll& p : polls) {
      CHECK(vote_shares(p)[0] == 1.0);
      CHECK(mean_predicted_shares(p)[0] == doctest::Approx(0.95));
      REQUIRE(p.question.notes.has_value());
      CHECK(*p.question.notes == "pure-guessing");
      // Observed beats predicted, so the surprise points at the wrong answer.
      CHECK(surprisingly_popular(p).chosen == 0);
    }
  }
}

TEST_CASE("simulate_prelec stochastic composition recovers the signal") {
  PrelecParams params;
  params.composition = Composition::Stochastic;
  auto polls = simulate_prelec(params, 25, 400, 4);
  CHECK(sp_accuracy(polls) >= 0.90);
  CHECK(majority_accuracy(polls) <= 0.10);
}

TEST_CASE("simulate_prelec randomized truth keeps the sp guarantee") {
  PrelecParams params;
  params.randomize_truth = true;
  auto polls = simulate_prelec(params, 100, 200, 5);
  int truth_on_first = 0;
  for (const Poll& p : polls) {
    if (*p.question.truth == 0) ++truth_on_first;
    CHECK(surprisingly_popular(p).chosen == *p.question.truth);
    CHECK(majority_vote(p).chosen != *p.question.truth);
  }
  CHECK(truth_on_first > 50);
  CHECK(truth_on_first < 150);
}

TEST_CASE("simulators are bit-reproducible and prefix-stable") {
  PrelecParams params;
  params.composition = Composition::Stochastic;

  auto a = simulate_prelec(params, 25, 10, 99);
  auto b = simulate_prelec(params, 25, 10, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].responses.size() == b[i].responses.size());
    for (std::size_t r = 0; r < a[i].responses.size(); ++r)
      CHECK(a[i].responses[r].vote == b[i].responses[r].vote);
  }

  // Growing the crowd must not change the draws of earlier respondents.
  auto small = simulate_prelec(params, 10, 6, 99);
  auto large = simulate_prelec(params, 30, 6, 99);
  for (std::size_t qi = 0; qi < small.size(); ++qi) {
    for (std::size_t r = 0; r < small[qi].responses.size(); ++r) {
      const Response& sr = small[qi].responses[r];
      const Response& lr = large[qi].responses[r];
      CHECK(sr.respondent_id == lr.respondent_id);
      CHECK(sr.vote == lr.vote);
    }
  }
}

TEST_CASE("condorcet_curve") {
  SUBCASE("symmetry at one half") {
    auto c = condorcet_curve(0.5, {1, 3, 5, 25});
    for (double v : c) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("hand value at p = 0.6, n = 3") {
    CHECK(condorcet_curve(0.6, {3})[0] == doctest::Approx(0.648).epsilon(1e-12));
  }
  SUBCASE("matches the independent binomial oracle") {
    for (int n : {1, 5, 25, 125})
      CHECK(condorcet_curve(0.6, {n})[0] ==
            doctest::Approx(binomial_majority_oracle(0.6, n)).epsilon(1e-10));
  }
  SUBCASE("monotone in n") {
    auto up = condorcet_curve(0.6, {1, 3, 5, 25, 125});
    for (std::size_t i = 1; i < up.size(); ++i) CHECK(up[i] > up[i - 1]);
    auto down = condorcet_curve(0.4, {1, 3, 5, 25, 125});
    for (std::size_t i = 1; i < down.size(); ++i) CHECK(down[i] < down[i - 1]);
  }
  SUBCASE("even sizes rejected") {
    CHECK_THROWS_AS(condorcet_curve(0.6, {4}), EvenSize);
  }
  SUBCASE("p out of range rejected") {
    CHECK_THROWS_AS(condorcet_curve(0.0, {3}), InvariantViolation);
  }
}

TEST_CASE("simulate_correlated_crowd") {
  SUBCASE("fully coupled always-wrong signal") {
    CorrelatedCrowdParams params;
    params.respondents = 25;
    params.coupling = 1.0;
    params.attractor_wrong_prob = 1.0;
    auto polls = simulate_correlated_crowd(params, 50, 6);
    CHECK(majority_accuracy(polls) == 0.0);
  }
  SUBCASE("uncoupled crowd matches the condorcet curve") {
    CorrelatedCrowdParams params;
    params.respondents = 125;
    params.independent_accuracy = 0.6;
    auto polls = simulate_correlated_crowd(params, 4000, 7);
    double analytic = condorcet_curve(0.6, {125})[0];
    CHECK(std::abs(majority_accuracy(polls) - analytic) <= 0.02);
  }
  SUBCASE("coupling caps accuracy near 1 - q") {
    CorrelatedCrowdParams params;
    params.respondents = 125;
    params.coupling = 0.9;
    params.attractor_wrong_prob = 0.4;
    auto polls = simulate_correlated_crowd(params, 4000, 8);
    CHECK(std::abs(majority_accuracy(polls) - 0.6) <= 0.03);
  }
  SUBCASE("uncoupled vote counts look binomial") {
    // Chi-square over correct-vote counts of Binomial(9, 0.6), pooled tails.
    CorrelatedCrowdParams params;
    params.respondents = 9;
    auto polls = simulate_correlated_crowd(params, 5000, 9);
    std::map<int, int> observed;
    for (const Poll& p : polls) {
      int correct = 0;
      for (const Response& r : p.responses)
        if (r.vote == Vote{*p.question.truth}) ++correct;
      ++observed[correct];
    }
    double chi2 = 0.0;
    for (int k = 0; k <= 9; ++k) {
      double pmf = 1.0;
      {
        double logp = std::lgamma(10.0) - std::lgamma(k + 1.0) - std::lgamma(10.0 - k) +
                      k * std::log(0.6) + (9 - k) * std::log(0.4);
        pmf = std::exp(logp);
      }
      double expected = 5000.0 * pmf;
      double diff = observed[k] - expected;
      chi2 += diff * diff / expected;
    }
    CHECK(chi2 < 30.0);  // 9 dof; this is far beyond any sane quantile
  }
}

TEST_CASE("simulate_null_control") {
  SUBCASE("independent raters have chance-level kappa") {
    NullControlParams params;
    params.items = 10000;
    params.follow_probs = {0.0, 0.0};
    auto ratings = simulate_null_control(params, 10);
    REQUIRE(ratings.size() == 2);
    CHECK(std::abs(*cohen_kappa(ratings[0], ratings[1])) <= 0.02);
  }
  SUBCASE("fully coupled raters agree perfectly") {
    NullControlParams params;
    params.items = 500;
    params.follow_probs = {1.0, 1.0};
    auto ratings = simulate_null_control(params, 11);
    CHECK(ratings[0] == ratings[1]);
    CHECK(*cohen_kappa(ratings[0], ratings[1]) == doctest::Approx(1.0));
  }
  SUBCASE("half coupling matches the independent oracle") {
    NullControlParams params;
    params.items = 10000;
    params.follow_probs = {0.5, 0.5};
    auto ratings = simulate_null_control(params, 12);
    double kappa = *cohen_kappa(ratings[0], ratings[1]);
    double oracle = null_control_kappa_oracle(0.5, 4, 50000, 1234);
    CHECK(kappa >= 0.2);
    CHECK(std::abs(kappa - oracle) <= 0.03);
    // Analytic value for lambda = 0.5, four options.
    CHECK(std::abs(kappa - 0.25) <= 0.03);
  }
  SUBCASE("shared biases alone do not create agreement") {
    NullControlParams params;
    params.items = 20000;
    params.follow_probs = {0.0, 0.0};
    params.biases = {{0.7, 0.1, 0.1, 0.1}, {0.7, 0.1, 0.1, 0.1}};
    auto ratings = simulate_null_control(params, 13);
    CHECK(std::abs(*cohen_kappa(ratings[0], ratings[1])) <= 0.03);
  }
}

TEST_CASE("random_string_questions") {
  auto qs = random_string_questions(25, 42);
  REQUIRE(qs.size() == 25);
  for (const auto& q : qs) {
    CHECK(q.options == std::vector<std::string>{"A", "B", "C", "D"});
    CHECK_FALSE(q.truth.has_value());
    CHECK(q.text.size() == 32);
  }
  CHECK(random_string_questions(25, 42)[0].text == qs[0].text);
  CHECK(random_string_questions(25, 43)[0].text != qs[0].text);
}
