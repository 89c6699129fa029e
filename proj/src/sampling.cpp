#include "crowdlab/sampling.hpp"

#include <atomic>
#include <filesystem>
#include <map>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "crowdlab/benchmark_io.hpp"
#include "crowdlab/json_util.hpp"
#include "crowdlab/parsing.hpp"
#include "crowdlab/prompts.hpp"
#include "crowdlab/response_log.hpp"

namespace crowdlab {

namespace {

EndpointConfig endpoint_from_json(const nlohmann::json& j) {
  EndpointConfig cfg;
  cfg.base_url = j.at("base_url").get<std::string>();
  cfg.model_name = j.at("model").get<std::string>();
  if (j.contains("api_key_env")) cfg.api_key_env = j.at("api_key_env").get<std::string>();
  if (j.contains("timeout_seconds")) cfg.timeout_seconds = j.at("timeout_seconds").get<double>();
  if (j.contains("max_retries")) cfg.max_retries = j.at("max_retries").get<int>();
  if (j.contains("max_in_flight")) cfg.max_in_flight = j.at("max_in_flight").get<int>();
  if (j.contains("max_tokens")) cfg.max_tokens = j.at("max_tokens").get<int>();
  if (j.contains("system_prompt") && !j.at("system_prompt").is_null())
    cfg.system_prompt = j.at("system_prompt").get<std::string>();
  return cfg;
}

nlohmann::json endpoint_to_json(const EndpointConfig& cfg) {
  nlohmann::json j;
  j["base_url"] = cfg.base_url;
  j["model"] = cfg.model_name;
  j["api_key_env"] = cfg.api_key_env;
  j["timeout_seconds"] = cfg.timeout_seconds;
  j["max_retries"] = cfg.max_retries;
  j["max_in_flight"] = cfg.max_in_flight;
  j["max_tokens"] = cfg.max_tokens;
  j["system_prompt"] =
      cfg.system_prompt ? nlohmann::json(*cfg.system_prompt) : nlohmann::json(nullptr);
  return j;
}

}  // namespace

RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  m.benchmark_path = j.at("benchmark").get<std::string>();
  m.output_log = j.at("output_log").get<std::string>();
  if (j.contains("seed")) m.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& e : j.at("endpoints")) m.endpoints.push_back(endpoint_from_json(e));

  if (j.contains("sampling")) {
    const auto& s = j.at("sampling");
    if (s.contains("temperatures"))
      m.sampling.temperatures = s.at("temperatures").get<std::vector<double>>();
    if (s.contains("samples_per_condition"))
      m.sampling.samples_per_condition = s.at("samples_per_condition").get<int>();
    if (s.contains("elicitations")) {
      m.sampling.elicitations.clear();
      for (const auto& e : s.at("elicitations")) {
        const auto kind = elicitation_from_string(e.get<std::string>());
        if (!kind) throw ConfigError("unknown elicitation: " + e.dump());
        m.sampling.elicitations.push_back(*kind);
      }
    }
  }
  return m;
}

nlohmann::json manifest_to_json(const RunManifest& m) {
  nlohmann::json j;
  j["benchmark"] = m.benchmark_path;
  j["output_log"] = m.output_log;
  j["seed"] = m.seed;
  j["endpoints"] = nlohmann::json::array();
  for (const auto& e : m.endpoints) j["endpoints"].push_back(endpoint_to_json(e));
  j["sampling"]["temperatures"] = m.sampling.temperatures;
  j["sampling"]["samples_per_condition"] = m.sampling.samples_per_condition;
  j["sampling"]["elicitations"] = nlohmann::json::array();
  for (const auto& e : m.sampling.elicitations)
    j["sampling"]["elicitations"].push_back(std::string(to_string(e)));
  return j;
}

RunManifest load_manifest(const std::string& path) {
  try {
    return manifest_from_json(parse_json_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest " + path + ": " + e.what());
  }
}

SamplingStats run_sampling(const RunManifest& manifest) {
  if (manifest.endpoints.empty()) throw ConfigError("manifest lists no endpoints");
  validate(manifest.sampling);
  for (const auto& e : manifest.endpoints) validate(e);
  if (manifest.output_log.empty()) throw ConfigError("manifest has no output_log");

  const std::vector<Question> questions = load_benchmark(manifest.benchmark_path);
  if (questions.empty()) throw ConfigError("benchmark file has no questions");

  // Every prompt must render before the first request goes out.
  for (const auto& q : questions)
    for (const auto kind : manifest.sampling.elicitations) render_prompt(q, kind);

  std::set<std::string> existing;
  if (std::filesystem::exists(manifest.output_log)) {
    for (const auto& r : read_log(manifest.output_log, nullptr, false))
      existing.insert(record_key(r));
  }

  struct Task {
    const Question* question;
    double temperature;
    Elicitation elicitation;
    int sample_index;
  };

  SamplingStats stats;
  std::vector<std::vector<Task>> task_lists(manifest.endpoints.size());
  for (std::size_t ei = 0; ei < manifest.endpoints.size(); ++ei) {
    const auto& endpoint = manifest.endpoints[ei];
    for (const auto& q : questions) {
      for (double t : manifest.sampling.temperatures) {
        for (const auto kind : manifest.sampling.elicitations) {
          for (int s = 0; s < manifest.sampling.samples_per_condition; ++s) {
            ++stats.planned;
            LogRecord probe;
            probe.question_id = q.id;
            probe.model = endpoint.model_name;
            probe.temperature = t;
            probe.elicitation = kind;
            probe.sample_index = s;
            if (existing.count(record_key(probe))) {
              ++stats.skipped;
              continue;
            }
            task_lists[ei].push_back(Task{&q, t, kind, s});
          }
        }
      }
    }
  }

  LogWriter writer(manifest.output_log, /*append=*/true);
  std::atomic<std::size_t> attempted{0}, succeeded{0}, failed{0};

  std::vector<std::thread> workers;
  for (std::size_t ei = 0; ei < manifest.endpoints.size(); ++ei) {
    const auto& endpoint = manifest.endpoints[ei];
    const auto& tasks = task_lists[ei];
    if (tasks.empty()) continue;

    auto shared_next = std::make_shared<std::atomic<std::size_t>>(0);
    const int n_workers =
        static_cast<int>(std::min<std::size_t>(endpoint.max_in_flight, tasks.size()));
    for (int w = 0; w < n_workers; ++w) {
      workers.emplace_back([&, shared_next]() {
        ChatClient client(endpoint);
        while (true) {
          const std::size_t i = shared_next->fetch_add(1);
          if (i >= tasks.size()) break;
          const Task& task = tasks[i];
          ++attempted;

          const std::string prompt = render_prompt(*task.question, task.elicitation);
          ChatResult result = client.complete(prompt, task.temperature);

          LogRecord record;
          record.question_id = task.question->id;
          record.benchmark = task.question->benchmark;
          record.model = endpoint.model_name;
          record.temperature = task.temperature;
          record.elicitation = task.elicitation;
          record.sample_index = task.sample_index;
          record.options = task.question->options;
          if (task.question->truth)
            record.truth_label =
                task.question->options[static_cast<std::size_t>(*task.question->truth)];
          record.timestamp = utc_now_iso8601();
          record.retry_count = result.retries;

          if (result.ok) {
            record.raw_text = result.text;
            ParseOutcome parsed =
                parse_response(result.text, task.elicitation, task.question->options);
            record.vote = parsed.vote;
            record.confidence = parsed.confidence;
            record.predicted_shares = parsed.predicted_shares;
            record.parse_flags = parsed.flags;
            ++succeeded;
          } else {
            record.error = result.error;
            ++failed;
          }
          writer.append(record);
        }
      });
    }
  }
  for (auto& w : workers) w.join();

  stats.attempted = attempted;
  stats.succeeded = succeeded;
  stats.failed = failed;
  return stats;
}

}  // namespace crowdlab
