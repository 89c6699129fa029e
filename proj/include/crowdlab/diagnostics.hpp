#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crowdlab/aggregation.hpp"
#include "crowdlab/types.hpp"

namespace crowdlab {

inline constexpr int kDefaultBootstrapResamples = 10000;
inline constexpr std::uint64_t kDefaultBootstrapSeed = 12345;
inline constexpr int kDefaultCalibrationBins = 10;

// Fraction of decisions whose chosen option equals the question's truth.
// Every decision's question must exist and carry a truth label.
double accuracy(const std::vector<AggregateDecision>& decisions,
                const std::vector<Question>& questions);

struct BootstrapCi {
  double point = 0.0;
  double low = 0.0;
  double high = 0.0;
};

// Percentile bootstrap over per-question outcomes, resampling questions with
// replacement. Deterministic given the seed. Quantiles use linear
// interpolation over the sorted resample means.
BootstrapCi bootstrap_ci(const std::vector<bool>& per_question_correct, double level = 0.95,
                         int resamples = kDefaultBootstrapResamples,
                         std::uint64_t seed = kDefaultBootstrapSeed);

// Chance-corrected agreement between two raters over aligned items. Items
// where either rating is unclear are dropped. Returns nullopt when expected
// agreement is 1 (both raters constant and identical), where kappa is
// undefined.
std::optional<double> cohen_kappa(const std::vector<Vote>& a, const std::vector<Vote>& b);

// Fleiss' kappa from an items x categories count matrix; every item must have
// the same number of raters (>= 2). Returns nullopt when expected agreement
// is 1.
std::optional<double> fleiss_kappa(const std::vector<std::vector<int>>& counts);

// Shannon entropy of a share vector, in bits, with 0 log 0 = 0.
double vote_entropy(const std::vector<double>& shares);

// Fraction of (question, model) keys whose tie-broken plurality answer
// differs between the two conditions. Both inputs must cover the same keys;
// the key of a poll is (question id, sorted condition models).
double plurality_flip_rate(const std::vector<Poll>& low_temperature,
                           const std::vector<Poll>& high_temperature);

struct ErrorConcentration {
  double value = 0.0;               // modal wrong answer count / total wrong answers
  bool trivially_concentrated = false;  // binary questions have only one wrong option
};

ErrorConcentration error_concentration(const std::vector<std::string>& wrong_answers,
                                       std::size_t option_count);

// Pairwise Pearson correlations over the rater rows plus an appended truth
// row (last index). Rows must align to the same item order, length >= 2.
// Entries involving a constant row are NaN: undefined, reported as missing.
std::vector<std::vector<double>> answer_truth_correlations(
    const std::vector<std::vector<double>>& rater_rows, const std::vector<double>& truth);

struct CalibrationBin {
  double mean_confidence = 0.0;
  double accuracy = 0.0;
  std::size_t count = 0;
};

struct Calibration {
  std::vector<CalibrationBin> bins;  // nonempty bins only, in bin order
  double ece = 0.0;
  std::size_t total = 0;
};

// Equal-width confidence bins over [0,1]; ECE is the count-weighted mean
// absolute gap between bin confidence and bin accuracy.
Calibration reliability_diagram(const std::vector<std::pair<double, bool>>& samples,
                                int bins = kDefaultCalibrationBins);

struct CurvePoint {
  std::string rater;
  std::string question_id;
  double x = 0.0;
  double y = 0.0;
};

struct ConsensusCurves {
  // x = agreement fraction of the plurality answer, y = mean confidence of
  // the responses that voted for it.
  std::vector<CurvePoint> agreement_confidence;
  // x = mean predicted share of the correct option, y = observed agreement
  // on the correct option. Requires truth labels.
  std::vector<CurvePoint> predicted_vs_observed;
};

// One point per poll per curve. Polls missing the confidence elicitation (or
// any clear vote) raise MissingElicitation for the first curve; polls missing
// predictions raise MissingElicitation and missing truth raises MissingTruth
// for the second.
ConsensusCurves consensus_curves(const std::vector<Poll>& polls);

// The two halves of consensus_curves, usable when only one elicitation was
// collected.
std::vector<CurvePoint> agreement_confidence_curve(const std::vector<Poll>& polls);
std::vector<CurvePoint> predicted_vs_observed_curve(const std::vector<Poll>& polls);

}  // namespace crowdlab
