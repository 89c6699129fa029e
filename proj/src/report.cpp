#include "crowdlab/report.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "crowdlab/json_util.hpp"
#include "crowdlab/svg.hpp"
#include "crowdlab/version.hpp"

namespace crowdlab {

namespace {

std::string fmt(double v, const char* spec = "%.4f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

}  // namespace

std::string accuracy_csv(const DiagnosticsReport& report) {
  std::ostringstream csv;
  csv << "benchmark,model,temperature,method,n_questions,accuracy,ci_low,ci_high,note\n";
  for (const auto& b : report.benchmarks) {
    for (const auto& crowd : b.crowds) {
      for (Method m : kAllMethods) {
        csv << b.benchmark << ',' << crowd.model << ',' << fmt(crowd.temperature, "%.2f") << ','
            << to_string(m) << ',';
        const auto it = crowd.by_method.find(m);
        if (it != crowd.by_method.end()) {
          csv << it->second.n_questions << ',' << fmt(it->second.point) << ','
              << fmt(it->second.low) << ',' << fmt(it->second.high) << ",\n";
        } else {
          const auto uit = crowd.unavailable.find(m);
          csv << ",,,," << "unavailable:" << (uit != crowd.unavailable.end() ? uit->second : "?")
              << "\n";
        }
      }
    }
  }
  return csv.str();
}

std::vector<std::string> write_report(const std::string& decisions_path,
                                      const std::string& diagnostics_path,
                                      const std::string& out_dir, bool with_svg) {
  std::filesystem::create_directories(out_dir);
  const std::vector<DecisionRecord> decisions = read_decisions(decisions_path);
  const DiagnosticsReport diagnostics =
      diagnostics_from_json(parse_json_file(diagnostics_path));

  std::vector<std::string> written;
  const std::string csv = accuracy_csv(diagnostics);
  const std::string csv_path = out_dir + "/accuracy.csv";
  write_file(csv_path, csv);
  written.push_back(csv_path);

  // Decision traceability: per-question chosen labels, one row per cell.
  {
    std::ostringstream dcsv;
    dcsv << "benchmark,model,temperature,question_id,method,chosen,tie_broken,correct,error\n";
    for (const auto& d : decisions) {
      dcsv << d.benchmark << ',' << d.model << ',' << fmt(d.temperature, "%.2f") << ','
           << d.question_id << ',' << to_string(d.method) << ','
           << (d.chosen_label ? *d.chosen_label : "") << ',' << (d.tie_broken ? "1" : "0") << ','
           << (d.correct ? (*d.correct ? "1" : "0") : "") << ',' << (d.error ? *d.error : "")
           << '\n';
    }
    const std::string path = out_dir + "/decisions.csv";
    write_file(path, dcsv.str());
    written.push_back(path);
  }

  nlohmann::json j;
  j["provenance"] = {
      {"tool", "crowdlab"},
      {"version", kVersion},
      {"inputs",
       {{"decisions", {{"path", decisions_path}, {"sha256", sha256_file(decisions_path)}}},
        {"diagnostics", {{"path", diagnostics_path}, {"sha256", sha256_file(diagnostics_path)}}}}},
      {"bootstrap", {{"seed", diagnostics.bootstrap_seed},
                     {"resamples", diagnostics.bootstrap_resamples}}},
  };
  j["diagnostics"] = diagnostics_to_json(diagnostics);
  j["decision_count"] = decisions.size();

  const std::string report_path = out_dir + "/report.json";
  write_file(report_path, j.dump(2) + "\n");
  written.push_back(report_path);

  if (with_svg) {
    for (const auto& b : diagnostics.benchmarks) {
      if (b.calibration) {
        SvgScatter plot;
        plot.title = "Reliability: " + b.benchmark;
        plot.x_label = "mean confidence";
        plot.y_label = "accuracy";
        for (const auto& bin : b.calibration->bins)
          plot.points.push_back({bin.mean_confidence, bin.accuracy,
                                 3.0 + 4.0 * static_cast<double>(bin.count) /
                                           static_cast<double>(b.calibration->total)});
        const std::string path = out_dir + "/reliability_" + slug(b.benchmark) + ".svg";
        write_file(path, plot.render());
        written.push_back(path);
      }
      if (!b.curves.agreement_confidence.empty()) {
        SvgScatter plot;
        plot.title = "Agreement vs confidence: " + b.benchmark;
        plot.x_label = "agreement fraction of plurality answer";
        plot.y_label = "mean confidence of plurality voters";
        for (const auto& p : b.curves.agreement_confidence) plot.points.push_back({p.x, p.y, 3.0});
        const std::string path = out_dir + "/agreement_confidence_" + slug(b.benchmark) + ".svg";
        write_file(path, plot.render());
        written.push_back(path);
      }
      if (!b.curves.predicted_vs_observed.empty()) {
        SvgScatter plot;
        plot.title = "Predicted share vs agreement: " + b.benchmark;
        plot.x_label = "mean predicted share of correct option";
        plot.y_label = "observed agreement on correct option";
        for (const auto& p : b.curves.predicted_vs_observed) plot.points.push_back({p.x, p.y, 3.0});
        const std::string path = out_dir + "/predicted_vs_observed_" + slug(b.benchmark) + ".svg";
        write_file(path, plot.render());
        written.push_back(path);
      }
    }
  }
  return written;
}

}  // namespace crowdlab
