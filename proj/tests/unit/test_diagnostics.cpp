#include <doctest.h>

#include <cmath>
#include <random>

#include "crowdlab/diagnostics.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace crowdlab;
using namespace crowdlab::testing;

namespace {

AggregateDecision decision_for(const std::string& qid, std::int32_t chosen) {
  AggregateDecision d;
  d.question_id = qid;
  d.method = Method::Majority;
  d.chosen = chosen;
  d.scores = {1.0, 0.0};
  return d;
}

}  // namespace

TEST_CASE("accuracy") {
  std::vector<Question> qs = {binary_question("a", {"YES", "NO"}, 0),
                              binary_question("b", {"YES", "NO"}, 1),
                              binary_question("c", {"YES", "NO"}, 1),
                              binary_question("d", {"YES", "NO"}, 0)};

  SUBCASE("all correct") {
    std::vector<AggregateDecision> ds = {decision_for("a", 0), decision_for("b", 1)};
    CHECK(accuracy(ds, qs) == 1.0);
  }
  SUBCASE("three of four") {
    std::vector<AggregateDecision> ds = {decision_for("a", 0), decision_for("b", 1),
                                         decision_for("c", 1), decision_for("d", 1)};
    CHECK(accuracy(ds, qs) == doctest::Approx(0.75));
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(accuracy({}, qs), EmptyInput);
  }
  SUBCASE("missing truth") {
    std::vector<Question> untruthed = {binary_question("a")};
    CHECK_THROWS_AS(accuracy({decision_for("a", 0)}, untruthed), MissingTruth);
  }
}

TEST_CASE("bootstrap_ci degenerate inputs") {
  BootstrapCi all_true = bootstrap_ci(std::vector<bool>(5, true));
  CHECK(all_true.point == 1.0);
  CHECK(all_true.low == 1.0);
  CHECK(all_true.high == 1.0);

  BootstrapCi all_false = bootstrap_ci(std::vector<bool>(4, false));
  CHECK(all_false.point == 0.0);
  CHECK(all_false.low == 0.0);
  CHECK(all_false.high == 0.0);

  CHECK_THROWS_AS(bootstrap_ci({}), EmptyInput);
}

TEST_CASE("bootstrap_ci matches exhaustive enumeration for small n") {
  // The enumeration oracle supplies the bounds; the sampler must land within
  // 0.01 of them.
  for (const auto& values : {std::vector<bool>{true, true, false},
                             std::vector<bool>{true, false, false, true},
                             std::vector<bool>{true, true, true, false, false}}) {
    EnumeratedBounds oracle = enumerate_bootstrap_bounds(values, 0.95);
    BootstrapCi got = bootstrap_ci(values, 0.95, 200000, 777);
    CHECK(std::abs(got.low - oracle.low) <= 0.01);
    CHECK(std::abs(got.high - oracle.high) <= 0.01);
  }
}

TEST_CASE("bootstrap_ci is deterministic given the seed") {
  std::vector<bool> v = {true, false, true, true, false, true};
  BootstrapCi a = bootstrap_ci(v, 0.95, 2000, 42);
  BootstrapCi b = bootstrap_ci(v, 0.95, 2000, 42);
  CHECK(a.low == b.low);
  CHECK(a.high == b.high);
}

TEST_CASE("cohen_kappa") {
  auto votes = [](std::initializer_list<int> xs) {
    std::vector<Vote> out;
    for (int x : xs) out.push_back(x < 0 ? Vote{} : Vote{x});
    return out;
  };

  SUBCASE("perfect agreement with two labels") {
    CHECK(*cohen_kappa(votes({0, 0, 1, 1}), votes({0, 0, 1, 1})) == doctest::Approx(1.0));
  }
  SUBCASE("hand case: po 0.75, pe 0.5") {
    CHECK(*cohen_kappa(votes({0, 0, 1, 1}), votes({0, 0, 1, 0})) == doctest::Approx(0.5));
  }
  SUBCASE("degenerate constant raters are undefined") {
    CHECK_FALSE(cohen_kappa(votes({0, 0, 0}), votes({0, 0, 0})).has_value());
  }
  SUBCASE("unclear items are dropped") {
    CHECK(*cohen_kappa(votes({0, -1, 1, 1}), votes({0, 1, -1, 1})) == doctest::Approx(1.0));
  }
  SUBCASE("nothing left after dropping") {
    CHECK_THROWS_AS(cohen_kappa(votes({-1}), votes({0})), EmptyInput);
  }
  SUBCASE("mismatched lengths") {
    CHECK_THROWS_AS(cohen_kappa(votes({0, 1}), votes({0})), InvariantViolation);
  }
  SUBCASE("chance agreement near zero") {
    std::mt19937_64 gen(5);
    std::vector<Vote> a, b;
    for (int i = 0; i < 10000; ++i) {
      a.push_back(static_cast<int>(gen() % 2));
      b.push_back(static_cast<int>(gen() % 2));
    }
    CHECK(std::abs(*cohen_kappa(a, b)) <= 0.05);
  }
  SUBCASE("symmetric in its raters") {
    std::mt19937_64 gen(6);
    std::vector<Vote> a, b;
    for (int i = 0; i < 200; ++i) {
      a.push_back(static_cast<int>(gen() % 3));
      b.push_back(static_cast<int>(gen() % 3));
    }
    CHECK(*cohen_kappa(a, b) == doctest::Approx(*cohen_kappa(b, a)));
  }
}

TEST_CASE("fleiss_kappa") {
  SUBCASE("perfect per-item agreement") {
    CHECK(*fleiss_kappa({{2, 0}, {0, 2}}) == doctest::Approx(1.0));
  }
  SUBCASE("everyone agrees everywhere on one category is degenerate") {
    CHECK_FALSE(fleiss_kappa({{3, 0}, {3, 0}}).has_value());
  }
  SUBCASE("uniform ratings drift to zero") {
    std::mt19937_64 gen(8);
    std::vector<std::vector<int>> counts;
    for (int i = 0; i < 3000; ++i) {
      std::vector<int> row(2, 0);
      for (int r = 0; r < 6; ++r) ++row[gen() % 2];
      counts.push_back(row);
    }
    CHECK(std::abs(*fleiss_kappa(counts)) <= 0.05);
  }
  SUBCASE("unequal rater counts rejected") {
    CHECK_THROWS_AS(fleiss_kappa({{2, 0}, {1, 2}}), InvariantViolation);
  }
}

TEST_CASE("vote_entropy") {
  CHECK(vote_entropy({1.0, 0.0}) == 0.0);
  CHECK(vote_entropy({0.5, 0.5}) == doctest::Approx(1.0));
  CHECK(vote_entropy({0.75, 0.25}) == doctest::Approx(0.8112781244591328).epsilon(1e-12));
  CHECK(vote_entropy({0.25, 0.25, 0.25, 0.25}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(vote_entropy({0.7, 0.7}), InvalidSimplex);
}

TEST_CASE("plurality_flip_rate") {
  auto poll_with = [](const std::string& qid, int ny, int nn) {
    Question q = binary_question(qid);
    std::vector<Response> rs;
    for (int i = 0; i < ny; ++i) rs.push_back(vote_response(q, 0, "m#" + std::to_string(i)));
    for (int i = 0; i < nn; ++i)
      rs.push_back(vote_response(q, 1, "m#" + std::to_string(ny + i)));
    Poll p = make_poll(q, std::move(rs));
    p.condition.models = {"m"};
    return p;
  };

  std::vector<Poll> low, high;
  for (int i = 0; i < 34; ++i) {
    low.push_back(poll_with("q" + std::to_string(i), 3, 1));
    high.push_back(poll_with("q" + std::to_string(i), i == 0 ? 1 : 3, i == 0 ? 3 : 1));
  }

  SUBCASE("identical sets never flip") {
    CHECK(plurality_flip_rate(low, low) == 0.0);
  }
  SUBCASE("one flip among 34") {
    CHECK(plurality_flip_rate(low, high) == doctest::Approx(1.0 / 34.0).epsilon(1e-12));
  }
  SUBCASE("every plurality flipped") {
    std::vector<Poll> inverted;
    for (int i = 0; i < 34; ++i) inverted.push_back(poll_with("q" + std::to_string(i), 1, 3));
    CHECK(plurality_flip_rate(low, inverted) == 1.0);
  }
  SUBCASE("key mismatch") {
    std::vector<Poll> extra = low;
    extra.push_back(poll_with("zz", 2, 1));
    CHECK_THROWS_AS(plurality_flip_rate(low, extra), KeyMismatch);
  }
}

TEST_CASE("error_concentration") {
  SUBCASE("modal share") {
    std::vector<std::string> wrong = {"A", "A", "A", "A", "A", "A", "A", "C", "C", "C"};
    ErrorConcentration ec = error_concentration(wrong, 4);
    CHECK(ec.value == doctest::Approx(0.7));
    CHECK_FALSE(ec.trivially_concentrated);
  }
  SUBCASE("all identical") {
    CHECK(error_concentration({"B", "B"}, 4).value == 1.0);
  }
  SUBCASE("binary questions are trivially concentrated") {
    ErrorConcentration ec = error_concentration({"NO", "NO", "NO"}, 2);
    CHECK(ec.value == 1.0);
    CHECK(ec.trivially_concentrated);
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(error_concentration({}, 2), EmptyInput);
  }
}

TEST_CASE("answer_truth_correlations") {
  const std::vector<double> truth = {1, 0, 1, 0};

  SUBCASE("identical and negated raters") {
    auto m = answer_truth_correlations({{1, 0, 1, 0}, {0, 1, 0, 1}}, truth);
    REQUIRE(m.size() == 3);
    CHECK(m[0][2] == doctest::Approx(1.0));   // rater 0 vs truth
    CHECK(m[1][2] == doctest::Approx(-1.0));  // rater 1 vs truth
    CHECK(m[0][1] == doctest::Approx(-1.0));
  }
  SUBCASE("orthogonal rater") {
    auto m = answer_truth_correlations({{1, 1, 0, 0}}, truth);
    CHECK(m[0][1] == doctest::Approx(0.0));
  }
  SUBCASE("constant rows are missing, not zero") {
    auto m = answer_truth_correlations({{1, 1, 1, 1}}, truth);
    CHECK(std::isnan(m[0][1]));
    CHECK(std::isnan(m[0][0]));
  }
  SUBCASE("too few items") {
    CHECK_THROWS_AS(answer_truth_correlations({{1.0}}, {1.0}), TooFewItems);
  }
}

TEST_CASE("reliability_diagram") {
  SUBCASE("single perfect bin") {
    Calibration c = reliability_diagram({{1.0, true}, {1.0, true}}, 10);
    REQUIRE(c.bins.size() == 1);
    CHECK(c.bins[0].mean_confidence == 1.0);
    CHECK(c.bins[0].accuracy == 1.0);
    CHECK(c.ece == 0.0);
  }
  SUBCASE("hand ECE of 0.4") {
    Calibration c = reliability_diagram(
        {{0.9, true}, {0.9, false}, {0.9, true}, {0.9, false}}, 10);
    CHECK(c.ece == doctest::Approx(0.4).epsilon(1e-12));
  }
  SUBCASE("perfect calibration by construction") {
    std::vector<std::pair<double, bool>> samples;
    // In each bin, accuracy equals the bin's single confidence value.
    for (int b = 0; b < 10; ++b) {
      double conf = b / 10.0 + 0.05;
      int correct = static_cast<int>(conf * 20);
      for (int i = 0; i < 20; ++i) samples.push_back({conf, i < correct});
    }
    CHECK(reliability_diagram(samples, 10).ece <= 0.0101);
  }
  SUBCASE("bin counts sum to the sample count") {
    std::mt19937_64 gen(4);
    std::vector<std::pair<double, bool>> samples;
    for (int i = 0; i < 500; ++i)
      samples.push_back({static_cast<double>(gen() % 101) / 100.0, gen() % 2 == 0});
    Calibration c = reliability_diagram(samples, 7);
    std::size_t total = 0;
    for (const auto& b : c.bins) total += b.count;
    CHECK(total == samples.size());
    CHECK(c.ece >= 0.0);
    CHECK(c.ece <= 1.0);
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(reliability_diagram({}, 10), EmptyInput);
  }
}

TEST_CASE("consensus_curves") {
  SUBCASE("unanimous confident poll maps to (1, 1)") {
    Question q = binary_question("u", {"YES", "NO"}, 0);
    Poll p = make_poll(q, {confidence_response(q, 0, 1.0, "a#0"),
                           confidence_response(q, 0, 1.0, "a#1")});
    auto pts = agreement_confidence_curve({p});
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].x == 1.0);
    CHECK(pts[0].y == 1.0);
  }
  SUBCASE("worked example maps to (0.08, 0.20)") {
    auto pts = predicted_vs_observed_curve({worked_example_poll()});
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].x == doctest::Approx(0.08).epsilon(1e-12));
    CHECK(pts[0].y == doctest::Approx(0.20).epsilon(1e-12));
  }
  SUBCASE("60/40 split with plurality confidence 0.7") {
    Question q = binary_question();
    std::vector<Response> rs;
    for (int i = 0; i < 3; ++i)
      rs.push_back(confidence_response(q, 0, 0.7, "m#" + std::to_string(i)));
    rs.push_back(confidence_response(q, 1, 0.9, "m#3"));
    rs.push_back(confidence_response(q, 1, 0.8, "m#4"));
    auto pts = agreement_confidence_curve({make_poll(q, std::move(rs))});
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].x == doctest::Approx(0.6));
    CHECK(pts[0].y == doctest::Approx(0.7));
  }
  SUBCASE("missing elicitation raises") {
    CHECK_THROWS_AS(agreement_confidence_curve({counted_poll(2, 1)}), MissingElicitation);
    CHECK_THROWS_AS(predicted_vs_observed_curve({counted_poll(2, 1)}), MissingElicitation);
  }
  SUBCASE("missing truth raises for the predicted curve") {
    Question q = binary_question();  // no truth
    Poll p = make_poll(q, {vote_response(q, 0, "m#0"), prediction_response(q, {0.6, 0.4}, "m#0")});
    CHECK_THROWS_AS(predicted_vs_observed_curve({p}), MissingTruth);
  }
}
