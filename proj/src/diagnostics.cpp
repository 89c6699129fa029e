#include "crowdlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "crowdlab/rng.hpp"

namespace crowdlab {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Linearly interpolated empirical quantile over sorted values.
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// Poll identity for cross-condition pairing: question id plus the sorted
// model set of its condition.
std::string poll_key(const Poll& p) {
  std::vector<std::string> models = p.condition.models;
  std::sort(models.begin(), models.end());
  std::string key = p.question.id;
  for (const auto& m : models) {
    key += '\x1f';
    key += m;
  }
  return key;
}

}  // namespace

double accuracy(const std::vector<AggregateDecision>& decisions,
                const std::vector<Question>& questions) {
  if (decisions.empty()) throw EmptyInput("no decisions to score");
  std::map<std::string, const Question*> by_id;
  for (const auto& q : questions) by_id.emplace(q.id, &q);

  std::size_t correct = 0;
  for (const auto& d : decisions) {
    const auto it = by_id.find(d.question_id);
    if (it == by_id.end())
      throw MissingTruth("decision references unknown question " + d.question_id);
    if (!it->second->truth)
      throw MissingTruth("question " + d.question_id + " has no truth label");
    if (d.chosen == *it->second->truth) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(decisions.size());
}

BootstrapCi bootstrap_ci(const std::vector<bool>& per_question_correct, double level,
                         int resamples, std::uint64_t seed) {
  if (per_question_correct.empty()) throw EmptyInput("bootstrap over zero questions");
  if (!(level > 0.0 && level < 1.0)) throw InvariantViolation("level must be in (0,1)");
  if (resamples < 1) throw InvariantViolation("resamples must be >= 1");

  const std::size_t n = per_question_correct.size();
  double sum = 0.0;
  for (bool b : per_question_correct) sum += b ? 1.0 : 0.0;

  SubstreamRng rng(seed);
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (auto& mean : means) {
    int hits = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (per_question_correct[rng.next_below(n)]) ++hits;
    mean = static_cast<double>(hits) / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());

  const double alpha = 1.0 - level;
  BootstrapCi ci;
  ci.point = sum / static_cast<double>(n);
  ci.low = quantile_sorted(means, alpha / 2.0);
  ci.high = quantile_sorted(means, 1.0 - alpha / 2.0);
  return ci;
}

std::optional<double> cohen_kappa(const std::vector<Vote>& a, const std::vector<Vote>& b) {
  if (a.size() != b.size()) throw InvariantViolation("rating vectors differ in length");

  // Items where either rating is unclear are dropped.
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && b[i]) pairs.emplace_back(*a[i], *b[i]);
  if (pairs.empty()) throw EmptyInput("no items left after dropping unclear ratings");

  const double n = static_cast<double>(pairs.size());
  double agree = 0.0;
  std::map<std::int32_t, double> ma, mb;
  for (const auto& [x, y] : pairs) {
    if (x == y) agree += 1.0;
    ma[x] += 1.0;
    mb[y] += 1.0;
  }
  const double po = agree / n;
  double pe = 0.0;
  for (const auto& [label, count] : ma) {
    const auto it = mb.find(label);
    if (it != mb.end()) pe += (count / n) * (it->second / n);
  }
  if (pe == 1.0) return std::nullopt;  // both raters constant and identical
  return (po - pe) / (1.0 - pe);
}

std::optional<double> fleiss_kappa(const std::vector<std::vector<int>>& counts) {
  if (counts.empty()) throw EmptyInput("no items");
  const std::size_t categories = counts.front().size();
  if (categories < 2) throw InvariantViolation("need at least two categories");

  long long raters = 0;
  for (const auto& row : counts) {
    if (row.size() != categories) throw InvariantViolation("ragged count matrix");
    long long total = 0;
    for (int c : row) {
      if (c < 0) throw InvariantViolation("negative count");
      total += c;
    }
    if (raters == 0) raters = total;
    if (total != raters) throw InvariantViolation("items rated by different rater counts");
  }
  if (raters < 2) throw InvariantViolation("need at least two raters per item");

  const double n = static_cast<double>(raters);
  const double items = static_cast<double>(counts.size());

  double p_bar = 0.0;
  std::vector<double> category_share(categories, 0.0);
  for (const auto& row : counts) {
    double agreement = 0.0;
    for (std::size_t j = 0; j < categories; ++j) {
      agreement += static_cast<double>(row[j]) * (static_cast<double>(row[j]) - 1.0);
      category_share[j] += static_cast<double>(row[j]);
    }
    p_bar += agreement / (n * (n - 1.0));
  }
  p_bar /= items;

  double pe = 0.0;
  for (double& share : category_share) {
    share /= items * n;
    pe += share * share;
  }
  if (pe == 1.0) return std::nullopt;
  return (p_bar - pe) / (1.0 - pe);
}

double vote_entropy(const std::vector<double>& shares) {
  if (!is_simplex(shares)) throw InvalidSimplex();
  double bits = 0.0;
  for (double p : shares)
    if (p > 0.0) bits -= p * std::log2(p);
  return bits;
}

double plurality_flip_rate(const std::vector<Poll>& low_temperature,
                           const std::vector<Poll>& high_temperature) {
  std::map<std::string, std::int32_t> low, high;
  for (const auto& p : low_temperature) low[poll_key(p)] = plurality_choice(p);
  for (const auto& p : high_temperature) high[poll_key(p)] = plurality_choice(p);
  if (low.size() != high.size()) throw KeyMismatch();
  if (low.empty()) throw EmptyInput("no polls to compare");

  std::size_t flips = 0;
  for (const auto& [key, choice] : low) {
    const auto it = high.find(key);
    if (it == high.end()) throw KeyMismatch("key missing from the second condition: " + key);
    if (it->second != choice) ++flips;
  }
  return static_cast<double>(flips) / static_cast<double>(low.size());
}

ErrorConcentration error_concentration(const std::vector<std::string>& wrong_answers,
                                       std::size_t option_count) {
  if (wrong_answers.empty()) throw EmptyInput("no wrong answers");
  std::map<std::string, std::size_t> counts;
  for (const auto& label : wrong_answers) ++counts[label];
  std::size_t modal = 0;
  for (const auto& [label, count] : counts) modal = std::max(modal, count);

  ErrorConcentration out;
  out.value = static_cast<double>(modal) / static_cast<double>(wrong_answers.size());
  out.trivially_concentrated = option_count == 2;
  return out;
}

std::vector<std::vector<double>> answer_truth_correlations(
    const std::vector<std::vector<double>>& rater_rows, const std::vector<double>& truth) {
  if (truth.size() < 2) throw TooFewItems();
  std::vector<std::vector<double>> rows = rater_rows;
  rows.push_back(truth);
  for (const auto& row : rows)
    if (row.size() != truth.size()) throw InvariantViolation("rows not aligned to item order");

  const std::size_t m = rows.size();
  const double n = static_cast<double>(truth.size());

  std::vector<double> mean(m, 0.0), sd(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (double v : rows[i]) mean[i] += v;
    mean[i] /= n;
    for (double v : rows[i]) sd[i] += (v - mean[i]) * (v - mean[i]);
    sd[i] = std::sqrt(sd[i]);
  }

  std::vector<std::vector<double>> corr(m, std::vector<double>(m, kNan));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (sd[i] == 0.0 || sd[j] == 0.0) continue;  // undefined stays NaN
      double cov = 0.0;
      for (std::size_t t = 0; t < truth.size(); ++t)
        cov += (rows[i][t] - mean[i]) * (rows[j][t] - mean[j]);
      corr[i][j] = corr[j][i] = cov / (sd[i] * sd[j]);
    }
  }
  return corr;
}

Calibration reliability_diagram(const std::vector<std::pair<double, bool>>& samples, int bins) {
  if (samples.empty()) throw EmptyInput("no (confidence, correctness) samples");
  if (bins < 1) throw InvariantViolation("bins must be >= 1");

  struct Acc {
    double conf_sum = 0.0;
    std::size_t correct = 0;
    std::size_t count = 0;
  };
  std::vector<Acc> acc(static_cast<std::size_t>(bins));
  for (const auto& [confidence, correct] : samples) {
    if (confidence < 0.0 || confidence > 1.0)
      throw InvariantViolation("confidence outside [0,1]");
    auto b = static_cast<std::size_t>(confidence * bins);
    if (b >= acc.size()) b = acc.size() - 1;  // confidence == 1.0
    acc[b].conf_sum += confidence;
    acc[b].correct += correct ? 1 : 0;
    acc[b].count += 1;
  }

  Calibration out;
  out.total = samples.size();
  for (const auto& a : acc) {
    if (a.count == 0) continue;
    CalibrationBin bin;
    bin.count = a.count;
    bin.mean_confidence = a.conf_sum / static_cast<double>(a.count);
    bin.accuracy = static_cast<double>(a.correct) / static_cast<double>(a.count);
    out.ece += static_cast<double>(a.count) / static_cast<double>(out.total) *
               std::abs(bin.mean_confidence - bin.accuracy);
    out.bins.push_back(bin);
  }
  return out;
}

std::vector<CurvePoint> agreement_confidence_curve(const std::vector<Poll>& polls) {
  std::vector<CurvePoint> points;
  for (const Poll& poll : polls) {
    bool any_confidence = false;
    for (const auto& r : poll.responses)
      if (r.vote && r.confidence) any_confidence = true;
    if (!any_confidence)
      throw MissingElicitation("poll " + poll.question.id +
                               " carries no voted confidence responses");

    const std::int32_t plurality = plurality_choice(poll);
    const std::vector<double> shares = vote_shares(poll);

    double conf_sum = 0.0;
    std::size_t conf_count = 0;
    for (const auto& r : poll.responses) {
      if (!r.vote || !r.confidence || *r.vote != plurality) continue;
      conf_sum += *r.confidence;
      ++conf_count;
    }
    if (conf_count == 0)
      throw MissingElicitation("poll " + poll.question.id +
                               ": no plurality voter carries a confidence");

    CurvePoint pt;
    pt.question_id = poll.question.id;
    pt.x = shares[static_cast<std::size_t>(plurality)];
    pt.y = conf_sum / static_cast<double>(conf_count);
    points.push_back(std::move(pt));
  }
  return points;
}

std::vector<CurvePoint> predicted_vs_observed_curve(const std::vector<Poll>& polls) {
  std::vector<CurvePoint> points;
  for (const Poll& poll : polls) {
    if (!poll.question.truth)
      throw MissingTruth("poll " + poll.question.id + " has no truth label");
    bool any_prediction = false;
    for (const auto& r : poll.responses)
      if (r.predicted_shares) any_prediction = true;
    if (!any_prediction)
      throw MissingElicitation("poll " + poll.question.id + " carries no predictions");

    const auto truth = static_cast<std::size_t>(*poll.question.truth);
    CurvePoint pt;
    pt.question_id = poll.question.id;
    pt.x = mean_predicted_shares(poll)[truth];
    pt.y = vote_shares(poll)[truth];
    points.push_back(std::move(pt));
  }
  return points;
}

ConsensusCurves consensus_curves(const std::vector<Poll>& polls) {
  ConsensusCurves out;
  out.agreement_confidence = agreement_confidence_curve(polls);
  out.predicted_vs_observed = predicted_vs_observed_curve(polls);
  return out;
}

}  // namespace crowdlab
