#include "crowdlab/diagnose.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

namespace crowdlab {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string format_temperature(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", t);
  return buf;
}

std::string rater_id(const std::string& model, double temperature, bool pool_models) {
  if (pool_models) return "pooled@" + format_temperature(temperature);
  return model + "@" + format_temperature(temperature);
}

// Poll keyed by (question, model) with the temperature dimension collapsed;
// used for cross-temperature flip rates.
std::map<std::pair<std::string, std::string>, Poll> per_model_polls_all_temps(
    const std::vector<LogRecord>& records, const std::string& benchmark) {
  std::vector<LogRecord> scoped;
  for (const auto& r : records)
    if (r.benchmark == benchmark) scoped.push_back(r);
  std::map<std::pair<std::string, std::string>, Poll> out;
  for (Poll& p : polls_from_log(scoped, Grouping::PerModel)) {
    // polls_from_log splits by temperature; merge those shards here.
    auto key = std::make_pair(p.question.id, p.condition.models.front());
    auto [it, inserted] = out.emplace(key, p);
    if (!inserted) {
      it->second.responses.insert(it->second.responses.end(), p.responses.begin(),
                                  p.responses.end());
      it->second.condition.temperature.reset();
    }
  }
  return out;
}

struct CrowdPolls {
  std::string model;  // or "ensemble"
  double temperature = 0.0;
  std::vector<Poll> polls;  // one per question, canonical order
};

std::vector<CrowdPolls> collect_crowds(const std::vector<LogRecord>& benchmark_records) {
  std::vector<CrowdPolls> crowds;

  std::map<std::pair<std::string, double>, std::vector<Poll>> per_model;
  for (Poll& p : polls_from_log(benchmark_records, Grouping::PerModel))
    per_model[{p.condition.models.front(), *p.condition.temperature}].push_back(std::move(p));
  for (auto& [key, polls] : per_model)
    crowds.push_back(CrowdPolls{key.first, key.second, std::move(polls)});

  std::map<double, std::vector<Poll>> ensemble;
  for (Poll& p : polls_from_log(benchmark_records, Grouping::Ensemble))
    ensemble[*p.condition.temperature].push_back(std::move(p));
  for (auto& [temperature, polls] : ensemble) {
    // Only meaningful when several models actually pooled.
    std::set<std::string> models;
    for (const auto& p : polls)
      models.insert(p.condition.models.begin(), p.condition.models.end());
    if (models.size() > 1)
      crowds.push_back(CrowdPolls{"ensemble", temperature, std::move(polls)});
  }
  return crowds;
}

CrowdAccuracy score_crowd(const CrowdPolls& crowd, const DiagnoseOptions& options) {
  CrowdAccuracy out;
  out.model = crowd.model;
  out.temperature = crowd.temperature;

  std::vector<const Poll*> truthed;
  for (const auto& p : crowd.polls)
    if (p.question.truth) truthed.push_back(&p);
  if (truthed.empty()) {
    for (Method m : kAllMethods) out.unavailable[m] = "MissingTruth";
    return out;
  }

  for (Method m : kAllMethods) {
    std::vector<bool> correct;
    correct.reserve(truthed.size());
    std::string error;
    for (const Poll* p : truthed) {
      try {
        AggregateDecision d;
        switch (m) {
          case Method::Majority: d = majority_vote(*p); break;
          case Method::HighestConfidence: d = highest_confidence(*p); break;
          case Method::ConfidenceWeighted: d = confidence_weighted(*p); break;
          case Method::PredictionWeighted:
            d = prediction_weighted(*p, options.prediction_weighting);
            break;
          case Method::SurprisinglyPopular: d = surprisingly_popular(*p); break;
          case Method::InverseSp: d = inverse_sp(*p); break;
        }
        correct.push_back(d.chosen == *p->question.truth);
      } catch (const Error& e) {
        error = e.code();
        break;
      }
    }
    if (!error.empty()) {
      out.unavailable[m] = error;
      continue;
    }
    const BootstrapCi ci = bootstrap_ci(correct, options.ci_level, options.bootstrap_resamples,
                                        options.bootstrap_seed);
    out.by_method[m] = MethodAccuracy{ci.point, ci.low, ci.high, correct.size()};
  }
  return out;
}

}  // namespace

DiagnosticsReport build_diagnostics(const std::vector<LogRecord>& records,
                                    const std::vector<LogRecord>* paired_records,
                                    const DiagnoseOptions& options) {
  DiagnosticsReport report;
  report.bootstrap_seed = options.bootstrap_seed;
  report.bootstrap_resamples = options.bootstrap_resamples;

  std::set<std::string> benchmarks;
  for (const auto& r : records) benchmarks.insert(r.benchmark);

  for (const std::string& benchmark : benchmarks) {
    std::vector<LogRecord> scoped;
    for (const auto& r : records)
      if (r.benchmark == benchmark) scoped.push_back(r);

    BenchmarkDiagnostics diag;
    diag.benchmark = benchmark;

    std::vector<CrowdPolls> crowds = collect_crowds(scoped);
    for (const auto& crowd : crowds) diag.crowds.push_back(score_crowd(crowd, options));

    // Rater ratings: tie-broken plurality per question, unclear when a rater
    // never produced a clear vote on it.
    std::set<std::string> question_ids;
    std::map<std::string, const Question*> question_by_id;
    for (const auto& crowd : crowds)
      for (const auto& p : crowd.polls) {
        question_ids.insert(p.question.id);
        question_by_id.emplace(p.question.id, &p.question);
      }

    std::map<std::string, std::map<std::string, Vote>> ratings;  // rater -> qid -> vote
    for (const auto& crowd : crowds) {
      if (crowd.model == "ensemble" && !options.pool_models) continue;
      if (crowd.model != "ensemble" && options.pool_models) continue;
      const std::string rater = rater_id(crowd.model, crowd.temperature, options.pool_models);
      for (const auto& p : crowd.polls) {
        Vote plurality;
        try {
          plurality = plurality_choice(p);
        } catch (const NoClearVotes&) {
        }
        ratings[rater][p.question.id] = plurality;
      }
    }
    // A single-model log at one temperature still gets its rater listed even
    // if pooling would have collapsed it away.
    if (ratings.empty() && !crowds.empty()) {
      for (const auto& crowd : crowds) {
        const std::string rater = rater_id(crowd.model, crowd.temperature, false);
        for (const auto& p : crowd.polls) {
          Vote plurality;
          try {
            plurality = plurality_choice(p);
          } catch (const NoClearVotes&) {
          }
          ratings[rater][p.question.id] = plurality;
        }
      }
    }

    std::vector<std::string> raters;
    for (const auto& [rater, _] : ratings) raters.push_back(rater);

    // Pairwise Cohen's kappa.
    diag.kappa.raters = raters;
    diag.kappa.values.assign(raters.size(), std::vector<double>(raters.size(), kNan));
    for (std::size_t i = 0; i < raters.size(); ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        std::vector<Vote> a, b;
        for (const auto& qid : question_ids) {
          const auto& ra = ratings[raters[i]];
          const auto& rb = ratings[raters[j]];
          const auto ita = ra.find(qid);
          const auto itb = rb.find(qid);
          a.push_back(ita == ra.end() ? Vote{} : ita->second);
          b.push_back(itb == rb.end() ? Vote{} : itb->second);
        }
        try {
          if (auto k = cohen_kappa(a, b)) diag.kappa.values[i][j] = diag.kappa.values[j][i] = *k;
        } catch (const Error&) {
        }
      }
    }

    // Fleiss' kappa over questions rated clearly by every rater.
    if (raters.size() >= 2 && !question_ids.empty()) {
      const std::size_t option_count = question_by_id.begin()->second->options.size();
      bool uniform_options = true;
      for (const auto& [qid, q] : question_by_id)
        if (q->options.size() != option_count) uniform_options = false;
      if (uniform_options) {
        std::vector<std::vector<int>> counts;
        for (const auto& qid : question_ids) {
          std::vector<int> row(option_count, 0);
          bool complete = true;
          for (const auto& rater : raters) {
            const Vote v = ratings[rater].count(qid) ? ratings[rater][qid] : Vote{};
            if (!v) {
              complete = false;
              break;
            }
            ++row[static_cast<std::size_t>(*v)];
          }
          if (complete) counts.push_back(std::move(row));
        }
        if (!counts.empty()) {
          try {
            diag.fleiss = fleiss_kappa(counts);
          } catch (const Error&) {
          }
        }
      }
    }

    // Vote entropy per question over the pooled clear votes.
    {
      std::map<std::string, Poll> merged;
      for (Poll& p : polls_from_log(scoped, Grouping::Ensemble)) {
        auto [it, inserted] = merged.emplace(p.question.id, p);
        if (!inserted)
          it->second.responses.insert(it->second.responses.end(), p.responses.begin(),
                                      p.responses.end());
      }
      for (const auto& [qid, poll] : merged) {
        try {
          diag.entropy_by_question.emplace_back(qid, vote_entropy(vote_shares(poll)));
        } catch (const Error&) {
        }
      }
    }

    // Flip rate against the paired log.
    if (paired_records != nullptr) {
      auto here = per_model_polls_all_temps(records, benchmark);
      auto there = per_model_polls_all_temps(*paired_records, benchmark);
      std::vector<Poll> low, high;
      for (auto& [key, p] : here) low.push_back(std::move(p));
      for (auto& [key, p] : there) high.push_back(std::move(p));
      diag.flip_rate = plurality_flip_rate(low, high);
    }

    // Error concentration: mean of per-question modal wrong-answer shares.
    {
      double sum = 0.0;
      std::size_t with_wrong = 0;
      bool all_binary = true;
      for (const auto& [qid, q] : question_by_id) {
        if (!q->truth) continue;
        if (q->options.size() != 2) all_binary = false;
        std::vector<std::string> wrong;
        for (const auto& r : scoped)
          if (r.question_id == qid && r.vote && *r.vote != *q->truth)
            wrong.push_back(q->options[static_cast<std::size_t>(*r.vote)]);
        if (wrong.empty()) continue;
        sum += error_concentration(wrong, q->options.size()).value;
        ++with_wrong;
      }
      if (with_wrong > 0) {
        ErrorConcentration ec;
        ec.value = sum / static_cast<double>(with_wrong);
        ec.trivially_concentrated = all_binary;
        diag.error_conc = ec;
      }
    }

    // Answer-truth Pearson matrix, binary benchmarks only, complete cases.
    {
      bool all_binary = true;
      for (const auto& [qid, q] : question_by_id)
        if (q->options.size() != 2) all_binary = false;
      std::vector<std::string> complete;
      if (all_binary) {
        for (const auto& qid : question_ids) {
          const Question* q = question_by_id[qid];
          if (!q->truth) continue;
          bool everyone = !raters.empty();
          for (const auto& rater : raters)
            if (!ratings[rater].count(qid) || !ratings[rater][qid]) everyone = false;
          if (everyone) complete.push_back(qid);
        }
      }
      if (complete.size() >= 2) {
        std::vector<std::vector<double>> rows;
        for (const auto& rater : raters) {
          std::vector<double> row;
          for (const auto& qid : complete)
            row.push_back(static_cast<double>(*ratings[rater][qid]));
          rows.push_back(std::move(row));
        }
        std::vector<double> truth_row;
        for (const auto& qid : complete)
          truth_row.push_back(static_cast<double>(*question_by_id[qid]->truth));
        diag.truth_correlations.values = answer_truth_correlations(rows, truth_row);
        diag.truth_correlations.raters = raters;
        diag.truth_correlations.raters.push_back("Truth");
      }
    }

    // Calibration over every voted confidence sample with truth.
    {
      std::vector<std::pair<double, bool>> samples;
      for (const auto& r : scoped) {
        if (!r.confidence || !r.vote) continue;
        const auto it = question_by_id.find(r.question_id);
        if (it == question_by_id.end() || !it->second->truth) continue;
        samples.emplace_back(*r.confidence, *r.vote == *it->second->truth);
      }
      if (!samples.empty())
        diag.calibration = reliability_diagram(samples, options.calibration_bins);
    }

    // Consensus curves per crowd, skipping polls that lack the inputs.
    for (const auto& crowd : crowds) {
      const std::string rater = rater_id(crowd.model, crowd.temperature, false);
      for (const auto& p : crowd.polls) {
        try {
          auto pts = agreement_confidence_curve({p});
          pts[0].rater = rater;
          diag.curves.agreement_confidence.push_back(std::move(pts[0]));
        } catch (const Error&) {
        }
        try {
          auto pts = predicted_vs_observed_curve({p});
          pts[0].rater = rater;
          diag.curves.predicted_vs_observed.push_back(std::move(pts[0]));
        } catch (const Error&) {
        }
      }
    }

    report.benchmarks.push_back(std::move(diag));
  }
  return report;
}

namespace {

nlohmann::json nan_to_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

double null_to_nan(const nlohmann::json& j) { return j.is_null() ? kNan : j.get<double>(); }

nlohmann::json matrix_to_json(const RaterMatrix& m) {
  nlohmann::json j;
  j["raters"] = m.raters;
  j["values"] = nlohmann::json::array();
  for (const auto& row : m.values) {
    nlohmann::json jrow = nlohmann::json::array();
    for (double v : row) jrow.push_back(nan_to_null(v));
    j["values"].push_back(std::move(jrow));
  }
  return j;
}

RaterMatrix matrix_from_json(const nlohmann::json& j) {
  RaterMatrix m;
  m.raters = j.at("raters").get<std::vector<std::string>>();
  for (const auto& jrow : j.at("values")) {
    std::vector<double> row;
    for (const auto& v : jrow) row.push_back(null_to_nan(v));
    m.values.push_back(std::move(row));
  }
  return m;
}

nlohmann::json curve_to_json(const std::vector<CurvePoint>& pts) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : pts)
    arr.push_back({{"rater", p.rater}, {"question_id", p.question_id}, {"x", p.x}, {"y", p.y}});
  return arr;
}

std::vector<CurvePoint> curve_from_json(const nlohmann::json& arr) {
  std::vector<CurvePoint> pts;
  for (const auto& j : arr) {
    CurvePoint p;
    p.rater = j.at("rater").get<std::string>();
    p.question_id = j.at("question_id").get<std::string>();
    p.x = j.at("x").get<double>();
    p.y = j.at("y").get<double>();
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace

nlohmann::json diagnostics_to_json(const DiagnosticsReport& report) {
  nlohmann::json j;
  j["bootstrap_seed"] = report.bootstrap_seed;
  j["bootstrap_resamples"] = report.bootstrap_resamples;
  j["benchmarks"] = nlohmann::json::array();
  for (const auto& b : report.benchmarks) {
    nlohmann::json jb;
    jb["benchmark"] = b.benchmark;
    jb["crowds"] = nlohmann::json::array();
    for (const auto& c : b.crowds) {
      nlohmann::json jc;
      jc["model"] = c.model;
      jc["temperature"] = c.temperature;
      jc["accuracy"] = nlohmann::json::object();
      for (const auto& [m, acc] : c.by_method) {
        jc["accuracy"][std::string(to_string(m))] = {{"point", acc.point},
                                                     {"low", acc.low},
                                                     {"high", acc.high},
                                                     {"n_questions", acc.n_questions}};
      }
      jc["unavailable"] = nlohmann::json::object();
      for (const auto& [m, code] : c.unavailable)
        jc["unavailable"][std::string(to_string(m))] = code;
      jb["crowds"].push_back(std::move(jc));
    }
    jb["kappa"] = matrix_to_json(b.kappa);
    jb["fleiss"] = b.fleiss ? nlohmann::json(*b.fleiss) : nlohmann::json(nullptr);
    jb["entropy_by_question"] = nlohmann::json::array();
    for (const auto& [qid, bits] : b.entropy_by_question)
      jb["entropy_by_question"].push_back({{"question_id", qid}, {"bits", bits}});
    jb["flip_rate"] = b.flip_rate ? nlohmann::json(*b.flip_rate) : nlohmann::json(nullptr);
    if (b.error_conc) {
      jb["error_concentration"] = {{"value", b.error_conc->value},
                                   {"trivially_concentrated", b.error_conc->trivially_concentrated}};
    } else {
      jb["error_concentration"] = nullptr;
    }
    jb["truth_correlations"] = matrix_to_json(b.truth_correlations);
    if (b.calibration) {
      nlohmann::json jc;
      jc["ece"] = b.calibration->ece;
      jc["total"] = b.calibration->total;
      jc["bins"] = nlohmann::json::array();
      for (const auto& bin : b.calibration->bins)
        jc["bins"].push_back({{"mean_confidence", bin.mean_confidence},
                              {"accuracy", bin.accuracy},
                              {"count", bin.count}});
      jb["calibration"] = std::move(jc);
    } else {
      jb["calibration"] = nullptr;
    }
    jb["curves"]["agreement_confidence"] = curve_to_json(b.curves.agreement_confidence);
    jb["curves"]["predicted_vs_observed"] = curve_to_json(b.curves.predicted_vs_observed);
    j["benchmarks"].push_back(std::move(jb));
  }
  return j;
}

DiagnosticsReport diagnostics_from_json(const nlohmann::json& j) {
  DiagnosticsReport report;
  report.bootstrap_seed = j.at("bootstrap_seed").get<std::uint64_t>();
  report.bootstrap_resamples = j.at("bootstrap_resamples").get<int>();
  for (const auto& jb : j.at("benchmarks")) {
    BenchmarkDiagnostics b;
    b.benchmark = jb.at("benchmark").get<std::string>();
    for (const auto& jc : jb.at("crowds")) {
      CrowdAccuracy c;
      c.model = jc.at("model").get<std::string>();
      c.temperature = jc.at("temperature").get<double>();
      for (const auto& [name, acc] : jc.at("accuracy").items()) {
        const auto m = method_from_string(name);
        if (!m) throw ParseError("unknown method: " + name);
        c.by_method[*m] = MethodAccuracy{acc.at("point").get<double>(), acc.at("low").get<double>(),
                                         acc.at("high").get<double>(),
                                         acc.at("n_questions").get<std::size_t>()};
      }
      for (const auto& [name, code] : jc.at("unavailable").items()) {
        const auto m = method_from_string(name);
        if (!m) throw ParseError("unknown method: " + name);
        c.unavailable[*m] = code.get<std::string>();
      }
      b.crowds.push_back(std::move(c));
    }
    b.kappa = matrix_from_json(jb.at("kappa"));
    if (!jb.at("fleiss").is_null()) b.fleiss = jb.at("fleiss").get<double>();
    for (const auto& je : jb.at("entropy_by_question"))
      b.entropy_by_question.emplace_back(je.at("question_id").get<std::string>(),
                                         je.at("bits").get<double>());
    if (!jb.at("flip_rate").is_null()) b.flip_rate = jb.at("flip_rate").get<double>();
    if (!jb.at("error_concentration").is_null()) {
      ErrorConcentration ec;
      ec.value = jb.at("error_concentration").at("value").get<double>();
      ec.trivially_concentrated =
          jb.at("error_concentration").at("trivially_concentrated").get<bool>();
      b.error_conc = ec;
    }
    b.truth_correlations = matrix_from_json(jb.at("truth_correlations"));
    if (!jb.at("calibration").is_null()) {
      Calibration c;
      c.ece = jb.at("calibration").at("ece").get<double>();
      c.total = jb.at("calibration").at("total").get<std::size_t>();
      for (const auto& jbin : jb.at("calibration").at("bins")) {
        CalibrationBin bin;
        bin.mean_confidence = jbin.at("mean_confidence").get<double>();
        bin.accuracy = jbin.at("accuracy").get<double>();
        bin.count = jbin.at("count").get<std::size_t>();
        c.bins.push_back(bin);
      }
      b.calibration = std::move(c);
    }
    b.curves.agreement_confidence = curve_from_json(jb.at("curves").at("agreement_confidence"));
    b.curves.predicted_vs_observed = curve_from_json(jb.at("curves").at("predicted_vs_observed"));
    report.benchmarks.push_back(std::move(b));
  }
  return report;
}

}  // namespace crowdlab
