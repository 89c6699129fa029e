// crowdlab: sample model polls, aggregate them, and report the diagnostics.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "crowdlab/benchmark_io.hpp"
#include "crowdlab/decisions.hpp"
#include "crowdlab/diagnose.hpp"
#include "crowdlab/json_util.hpp"
#include "crowdlab/report.hpp"
#include "crowdlab/response_log.hpp"
#include "crowdlab/sampling.hpp"
#include "crowdlab/simulation.hpp"
#include "crowdlab/version.hpp"

namespace {

using crowdlab::DiagnoseOptions;
using crowdlab::LogRecord;
using nlohmann::json;

void print_error(const std::string& code, const std::string& what) {
  json j;
  j["error"] = code;
  j["message"] = what;
  std::cerr << j.dump() << "\n";
}

// Sidecar provenance so any output can be re-derived from its exact inputs.
void write_provenance(const std::string& out_path, const json& inputs, const json& config) {
  json j;
  j["tool"] = "crowdlab";
  j["version"] = crowdlab::kVersion;
  j["inputs"] = inputs;
  j["config"] = config;
  j["written_at"] = crowdlab::utc_now_iso8601();
  crowdlab::write_file(out_path + ".provenance.json", j.dump(2) + "\n");
}

int cmd_sample(const std::string& manifest_path) {
  const crowdlab::RunManifest manifest = crowdlab::load_manifest(manifest_path);
  const crowdlab::SamplingStats stats = crowdlab::run_sampling(manifest);
  json inputs;
  inputs["manifest"] = {{"path", manifest_path}, {"sha256", crowdlab::sha256_file(manifest_path)}};
  inputs["benchmark"] = {{"path", manifest.benchmark_path},
                         {"sha256", crowdlab::sha256_file(manifest.benchmark_path)}};
  write_provenance(manifest.output_log, inputs, crowdlab::manifest_to_json(manifest));
  std::cout << "planned " << stats.planned << ", skipped " << stats.skipped << ", attempted "
            << stats.attempted << ", succeeded " << stats.succeeded << ", failed " << stats.failed
            << "\n";
  return stats.failed == 0 ? 0 : 1;
}

int cmd_aggregate(const std::string& log_path, const std::string& out_path,
                  bool canonical_weighting) {
  const std::vector<LogRecord> records = crowdlab::read_log(log_path);
  const auto weighting = canonical_weighting ? crowdlab::PredictionWeighting::Canonical
                                             : crowdlab::PredictionWeighting::OwnVote;
  const auto decisions = crowdlab::decide_all(records, weighting);
  crowdlab::write_decisions(out_path, decisions);
  json inputs;
  inputs["log"] = {{"path", log_path}, {"sha256", crowdlab::sha256_file(log_path)}};
  json config;
  config["prediction_weighting"] = canonical_weighting ? "canonical" : "own_vote";
  write_provenance(out_path, inputs, config);
  std::cout << "wrote " << decisions.size() << " decisions to " << out_path << "\n";
  return 0;
}

int cmd_diagnose(const std::string& log_path, const std::string& pair_with,
                 const std::string& out_path, const DiagnoseOptions& options) {
  const std::vector<LogRecord> records = crowdlab::read_log(log_path);
  std::vector<LogRecord> paired;
  if (!pair_with.empty()) paired = crowdlab::read_log(pair_with);
  const crowdlab::DiagnosticsReport report =
      crowdlab::build_diagnostics(records, pair_with.empty() ? nullptr : &paired, options);
  crowdlab::write_file(out_path, crowdlab::diagnostics_to_json(report).dump(2) + "\n");

  json inputs;
  inputs["log"] = {{"path", log_path}, {"sha256", crowdlab::sha256_file(log_path)}};
  if (!pair_with.empty())
    inputs["pair_with"] = {{"path", pair_with}, {"sha256", crowdlab::sha256_file(pair_with)}};
  json config;
  config["bootstrap_seed"] = options.bootstrap_seed;
  config["bootstrap_resamples"] = options.bootstrap_resamples;
  config["calibration_bins"] = options.calibration_bins;
  config["pool_models"] = options.pool_models;
  write_provenance(out_path, inputs, config);
  std::cout << "wrote diagnostics for " << report.benchmarks.size() << " benchmark(s) to "
            << out_path << "\n";
  return 0;
}

int cmd_simulate(const std::string& model, const std::string& params_path, std::uint64_t seed,
                 const std::string& out_path) {
  const json params =
      params_path.empty() ? json::object() : crowdlab::parse_json_file(params_path);

  crowdlab::LogWriter writer(out_path, /*append=*/false);
  std::size_t rows = 0;

  if (model == "prelec") {
    crowdlab::PrelecParams p;
    if (params.contains("informed_fraction")) p.informed_fraction = params.at("informed_fraction");
    if (params.contains("informed_prediction"))
      p.informed_prediction = params.at("informed_prediction");
    if (params.contains("uninformed_prediction"))
      p.uninformed_prediction = params.at("uninformed_prediction");
    if (params.contains("composition"))
      p.composition = params.at("composition") == "stochastic" ? crowdlab::Composition::Stochastic
                                                               : crowdlab::Composition::Exact;
    if (params.contains("deterministic_votes"))
      p.deterministic_votes = params.at("deterministic_votes");
    if (params.contains("randomize_truth")) p.randomize_truth = params.at("randomize_truth");
    const int respondents = params.value("respondents", 100);
    const int questions = params.value("questions", 100);
    for (const auto& poll : crowdlab::simulate_prelec(p, respondents, questions, seed))
      for (const auto& rec : crowdlab::records_from_poll(poll, "synthetic")) {
        writer.append(rec);
        ++rows;
      }
  } else if (model == "correlated") {
    crowdlab::CorrelatedCrowdParams p;
    if (params.contains("respondents")) p.respondents = params.at("respondents");
    if (params.contains("independent_accuracy"))
      p.independent_accuracy = params.at("independent_accuracy");
    if (params.contains("coupling")) p.coupling = params.at("coupling");
    if (params.contains("attractor_wrong_prob"))
      p.attractor_wrong_prob = params.at("attractor_wrong_prob");
    const int questions = params.value("questions", 1000);
    for (const auto& poll : crowdlab::simulate_correlated_crowd(p, questions, seed))
      for (const auto& rec : crowdlab::records_from_poll(poll, "synthetic")) {
        writer.append(rec);
        ++rows;
      }
  } else if (model == "null") {
    crowdlab::NullControlParams p;
    if (params.contains("option_count")) p.option_count = params.at("option_count");
    if (params.contains("items")) p.items = params.at("items");
    if (params.contains("follow_probs"))
      p.follow_probs = params.at("follow_probs").get<std::vector<double>>();
    if (p.follow_probs.empty()) p.follow_probs = {0.5, 0.5};
    if (params.contains("biases"))
      p.biases = params.at("biases").get<std::vector<std::vector<double>>>();
    const auto ratings = crowdlab::simulate_null_control(p, seed);

    std::vector<std::string> options;
    for (int o = 0; o < p.option_count; ++o) options.push_back(std::string(1, 'A' + o));
    for (std::size_t r = 0; r < ratings.size(); ++r) {
      for (std::size_t i = 0; i < ratings[r].size(); ++i) {
        LogRecord rec;
        rec.question_id = "item-" + std::to_string(i);
        rec.benchmark = "null-control";
        rec.model = "rater" + std::to_string(r);
        rec.temperature = 0.0;
        rec.elicitation = crowdlab::Elicitation::Direct;
        rec.sample_index = 0;
        rec.options = options;
        rec.vote = ratings[r][i];
        writer.append(rec);
        ++rows;
      }
    }
  } else {
    throw crowdlab::ConfigError("unknown simulator model: " + model);
  }

  json inputs;
  if (!params_path.empty())
    inputs["params"] = {{"path", params_path}, {"sha256", crowdlab::sha256_file(params_path)}};
  json config;
  config["model"] = model;
  config["seed"] = seed;
  config["params"] = params;
  write_provenance(out_path, inputs, config);
  std::cout << "wrote " << rows << " records to " << out_path << "\n";
  return 0;
}

int cmd_report(const std::string& decisions_path, const std::string& diagnostics_path,
               const std::string& out_dir, bool with_svg) {
  const auto written = crowdlab::write_report(decisions_path, diagnostics_path, out_dir, with_svg);
  for (const auto& path : written) std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crowd aggregation laboratory"};
  app.set_version_flag("--version", crowdlab::kVersion);
  app.require_subcommand(1);

  std::string manifest_path;
  auto* sample = app.add_subcommand("sample", "run the sampling protocol against endpoints");
  sample->add_option("--manifest", manifest_path, "run manifest (json)")->required();

  std::string agg_log, agg_out;
  bool agg_canonical = false;
  auto* aggregate = app.add_subcommand("aggregate", "apply every aggregation rule to a log");
  aggregate->add_option("--log", agg_log, "response log (jsonl)")->required();
  aggregate->add_option("--out", agg_out, "decisions file to write (jsonl)")->required();
  aggregate->add_flag("--canonical-prediction-weighting", agg_canonical,
                      "weight by first-option share instead of own-vote share");

  std::string diag_log, diag_pair, diag_out;
  DiagnoseOptions diag_options;
  auto* diagnose = app.add_subcommand("diagnose", "compute the diagnostics report for a log");
  diagnose->add_option("--log", diag_log, "response log (jsonl)")->required();
  diagnose->add_option("--pair-with", diag_pair, "second log for the plurality flip rate");
  diagnose->add_option("--out", diag_out, "diagnostics report to write (json)")->required();
  diagnose->add_option("--seed", diag_options.bootstrap_seed, "bootstrap seed");
  diagnose->add_option("--resamples", diag_options.bootstrap_resamples, "bootstrap resamples");
  diagnose->add_option("--bins", diag_options.calibration_bins, "calibration bins");
  diagnose->add_flag("--pool-models", diag_options.pool_models,
                     "treat each temperature's pooled models as one rater");

  std::string sim_model, sim_params, sim_out;
  std::uint64_t sim_seed = 0;
  auto* simulate = app.add_subcommand("simulate", "write a synthetic response log");
  simulate->add_option("--model", sim_model, "prelec | correlated | null")->required();
  simulate->add_option("--params", sim_params, "simulator parameters (json)");
  simulate->add_option("--seed", sim_seed, "master seed");
  simulate->add_option("--out", sim_out, "response log to write (jsonl)")->required();

  std::string rep_decisions, rep_diagnostics, rep_out_dir;
  bool rep_svg = false;
  auto* report = app.add_subcommand("report", "render csv/json (and svg) report tables");
  report->add_option("--decisions", rep_decisions, "decisions file (jsonl)")->required();
  report->add_option("--diagnostics", rep_diagnostics, "diagnostics report (json)")->required();
  report->add_option("--out-dir", rep_out_dir, "output directory")->required();
  report->add_flag("--svg", rep_svg, "also write svg plots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
        e.get_name() == "CallForVersion")
      return app.exit(e);
    app.exit(e);
    return 2;  // usage error
  }

  try {
    if (sample->parsed()) return cmd_sample(manifest_path);
    if (aggregate->parsed()) return cmd_aggregate(agg_log, agg_out, agg_canonical);
    if (diagnose->parsed()) return cmd_diagnose(diag_log, diag_pair, diag_out, diag_options);
    if (simulate->parsed()) return cmd_simulate(sim_model, sim_params, sim_seed, sim_out);
    if (report->parsed()) return cmd_report(rep_decisions, rep_diagnostics, rep_out_dir, rep_svg);
  } catch (const crowdlab::Error& e) {
    print_error(e.code(), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("Unexpected", e.what());
    return 1;
  }
  return 2;
}
