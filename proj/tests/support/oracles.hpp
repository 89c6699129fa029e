#pragma once

// Independent oracles used by the unit and acceptance suites. Nothing here
// reuses library code paths: data generation and statistics are written from
// scratch against std::mt19937_64 so a shared bug cannot hide.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace crowdlab::testing {

// Exhaustive percentile bootstrap over all n^n equally likely resamples of
// `values` (n <= 7 or so). Bounds are inverse-CDF quantiles of the resample
// means.
struct EnumeratedBounds {
  double low = 0.0;
  double high = 0.0;
};

inline EnumeratedBounds enumerate_bootstrap_bounds(const std::vector<bool>& values,
                                                   double level) {
  const std::size_t n = values.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= n;

  std::vector<double> means;
  means.reserve(total);
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t t = 0; t < total; ++t) {
    int sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += values[idx[i]] ? 1 : 0;
    means.push_back(static_cast<double>(sum) / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (++idx[i] < n) break;
      idx[i] = 0;
    }
  }
  std::sort(means.begin(), means.end());

  auto inverse_cdf = [&](double q) {
    std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(total)));
    if (rank == 0) rank = 1;
    if (rank > total) rank = total;
    return means[rank - 1];
  };
  const double alpha = 1.0 - level;
  return {inverse_cdf(alpha / 2.0), inverse_cdf(1.0 - alpha / 2.0)};
}

// Majority accuracy of the coupled crowd, simulated directly: per question a
// shared signal equals the truth with probability 1-q, else a fixed wrong
// option; each voter copies the signal with probability rho, otherwise is
// independently correct with probability p. Exact vote ties resolve to the
// second option, which is where these crowds keep the truth.
inline double correlated_majority_oracle(int respondents, double p, double rho, double q,
                                         int n_questions, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto unit = [&] { return std::generate_canonical<double, 53>(gen); };
  int correct_questions = 0;
  for (int qi = 0; qi < n_questions; ++qi) {
    const bool signal_correct = unit() >= q;
    int correct_votes = 0;
    for (int r = 0; r < respondents; ++r) {
      bool correct;
      if (unit() < rho) {
        correct = signal_correct;
      } else {
        correct = unit() < p;
      }
      if (correct) ++correct_votes;
    }
    const int wrong_votes = respondents - correct_votes;
    if (correct_votes >= wrong_votes) ++correct_questions;
  }
  return static_cast<double>(correct_questions) / static_cast<double>(n_questions);
}

// Cohen's kappa between two synthetic raters who each follow a shared
// per-item attractor with probability lambda and otherwise answer uniformly
// over k options. Self-contained: agreement counts and marginals are
// computed here.
inline double null_control_kappa_oracle(double lambda, int option_count, int items,
                                        std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto unit = [&] { return std::generate_canonical<double, 53>(gen); };
  auto uniform_option = [&] { return static_cast<int>(gen() % static_cast<unsigned>(option_count)); };

  std::vector<int> a(items), b(items);
  for (int i = 0; i < items; ++i) {
    const int attractor = uniform_option();
    a[i] = unit() < lambda ? attractor : uniform_option();
    b[i] = unit() < lambda ? attractor : uniform_option();
  }

  double agree = 0.0;
  std::vector<double> ma(option_count, 0.0), mb(option_count, 0.0);
  for (int i = 0; i < items; ++i) {
    if (a[i] == b[i]) agree += 1.0;
    ma[a[i]] += 1.0;
    mb[b[i]] += 1.0;
  }
  const double n = static_cast<double>(items);
  const double po = agree / n;
  double pe = 0.0;
  for (int o = 0; o < option_count; ++o) pe += (ma[o] / n) * (mb[o] / n);
  return (po - pe) / (1.0 - pe);
}

// Exact majority accuracy for n independent voters, each correct with
// probability p, via the binomial tail. Odd n only.
inline double binomial_majority_oracle(double p, int n) {
  double pmf = std::pow(1.0 - p, n);  // k = 0
  double tail = 0.0;
  for (int k = 0; k <= n; ++k) {
    if (2 * k > n) tail += pmf;
    pmf *= static_cast<double>(n - k) / static_cast<double>(k + 1) * p / (1.0 - p);
  }
  return tail;
}

}  // namespace crowdlab::testing
