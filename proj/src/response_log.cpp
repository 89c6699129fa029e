#include "crowdlab/response_log.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "crowdlab/json_util.hpp"
#include "crowdlab/parsing.hpp"

namespace crowdlab {

namespace {

nlohmann::json vote_to_json(const LogRecord& r) {
  if (!r.vote) return "unclear";
  return r.options.at(static_cast<std::size_t>(*r.vote));
}

Vote vote_from_json(const nlohmann::json& j, const std::vector<std::string>& options) {
  if (j.is_null()) return std::nullopt;
  const std::string label = j.get<std::string>();
  if (label == "unclear") return std::nullopt;
  const std::string folded = fold_case(label);
  for (std::size_t i = 0; i < options.size(); ++i)
    if (fold_case(options[i]) == folded) return static_cast<std::int32_t>(i);
  throw ParseError("vote label '" + label + "' is not one of the record's options");
}

}  // namespace

std::string record_key(const LogRecord& r) {
  std::ostringstream key;
  key << r.question_id << '\x1f' << r.model << '\x1f' << r.temperature << '\x1f'
      << to_string(r.elicitation) << '\x1f' << r.sample_index;
  return key.str();
}

std::string record_to_jsonl(const LogRecord& r) {
  nlohmann::json j;
  j["question_id"] = r.question_id;
  j["benchmark"] = r.benchmark;
  j["model"] = r.model;
  j["temperature"] = r.temperature;
  j["elicitation"] = to_string(r.elicitation);
  j["sample_index"] = r.sample_index;
  j["options"] = r.options;
  j["truth"] = r.truth_label ? nlohmann::json(*r.truth_label) : nlohmann::json(nullptr);
  j["raw_text"] = r.raw_text ? nlohmann::json(*r.raw_text) : nlohmann::json(nullptr);
  j["vote"] = vote_to_json(r);
  j["confidence"] = r.confidence ? nlohmann::json(*r.confidence) : nlohmann::json(nullptr);
  j["predicted_shares"] =
      r.predicted_shares ? nlohmann::json(*r.predicted_shares) : nlohmann::json(nullptr);
  j["parse_flags"] = r.parse_flags;
  j["timestamp"] = r.timestamp;
  j["retry_count"] = r.retry_count;
  j["error"] = r.error ? nlohmann::json(*r.error) : nlohmann::json(nullptr);
  return j.dump();
}

LogRecord record_from_jsonl(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line);
  LogRecord r;
  r.question_id = j.at("question_id").get<std::string>();
  r.benchmark = j.at("benchmark").get<std::string>();
  r.model = j.at("model").get<std::string>();
  r.temperature = j.at("temperature").get<double>();
  const auto kind = elicitation_from_string(j.at("elicitation").get<std::string>());
  if (!kind) throw ParseError("unknown elicitation: " + j.at("elicitation").dump());
  r.elicitation = *kind;
  r.sample_index = j.at("sample_index").get<int>();
  r.options = j.at("options").get<std::vector<std::string>>();
  if (j.contains("truth") && !j.at("truth").is_null())
    r.truth_label = j.at("truth").get<std::string>();
  if (j.contains("raw_text") && !j.at("raw_text").is_null())
    r.raw_text = j.at("raw_text").get<std::string>();
  r.vote = vote_from_json(j.at("vote"), r.options);
  if (j.contains("confidence") && !j.at("confidence").is_null())
    r.confidence = j.at("confidence").get<double>();
  if (j.contains("predicted_shares") && !j.at("predicted_shares").is_null())
    r.predicted_shares = j.at("predicted_shares").get<std::vector<double>>();
  if (j.contains("parse_flags")) r.parse_flags = j.at("parse_flags").get<std::vector<std::string>>();
  if (j.contains("timestamp")) r.timestamp = j.at("timestamp").get<std::string>();
  if (j.contains("retry_count")) r.retry_count = j.at("retry_count").get<int>();
  if (j.contains("error") && !j.at("error").is_null())
    r.error = j.at("error").get<std::string>();
  return r;
}

LogWriter::LogWriter(const std::string& path, bool append)
    : out_(path, append ? std::ios::app : std::ios::trunc) {
  if (!out_) throw IoError("cannot open log for writing: " + path);
}

void LogWriter::append(const LogRecord& r) {
  std::lock_guard<std::mutex> lock(mu_);
  out_ << record_to_jsonl(r) << '\n';
  out_.flush();
  if (!out_) throw IoError("log append failed");
}

std::vector<LogRecord> read_log(const std::string& path, ReadStats* stats, bool verify_parse) {
  const std::string content = read_file(path);
  ReadStats local;
  std::vector<LogRecord> records;

  std::size_t begin = 0;
  while (begin < content.size()) {
    std::size_t end = content.find('\n', begin);
    const bool complete_line = end != std::string::npos;
    if (!complete_line) end = content.size();
    const std::string line = content.substr(begin, end - begin);
    begin = end + 1;

    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!complete_line) {
      // A final line without its newline is an interrupted append; skip it.
      ++local.truncated_tail;
      std::cerr << "warning: " << path << ": truncated final line skipped\n";
      break;
    }
    try {
      records.push_back(record_from_jsonl(line));
    } catch (const std::exception& e) {
      ++local.corrupt;
      std::cerr << "warning: " << path << ": corrupt record skipped: " << e.what() << "\n";
      continue;
    }
  }

  if (verify_parse) {
    for (const auto& r : records) {
      if (!r.raw_text || r.error) continue;
      const ParseOutcome fresh = parse_response(*r.raw_text, r.elicitation, r.options);
      bool same = fresh.vote == r.vote && fresh.confidence == r.confidence &&
                  fresh.predicted_shares == r.predicted_shares;
      if (!same) {
        ++local.parse_mismatches;
        std::cerr << "warning: " << path << ": stored parse disagrees with re-parse for key "
                  << record_key(r) << "\n";
      }
    }
  }

  local.records = records.size();
  if (stats) *stats = local;
  return records;
}

std::vector<Poll> polls_from_log(const std::vector<LogRecord>& records, Grouping grouping) {
  struct GroupKey {
    std::string benchmark;
    std::string question_id;
    std::string model;  // empty for ensemble grouping
    double temperature;
    bool operator<(const GroupKey& o) const {
      return std::tie(benchmark, question_id, model, temperature) <
             std::tie(o.benchmark, o.question_id, o.model, o.temperature);
    }
  };

  std::map<GroupKey, std::vector<const LogRecord*>> groups;
  for (const auto& r : records) {
    GroupKey key{r.benchmark, r.question_id,
                 grouping == Grouping::PerModel ? r.model : std::string(), r.temperature};
    groups[key].push_back(&r);
  }

  std::vector<Poll> polls;
  for (const auto& [key, members] : groups) {
    Poll poll;
    Question q;
    q.id = key.question_id;
    q.benchmark = key.benchmark;
    q.options = members.front()->options;
    if (members.front()->truth_label) {
      const std::string folded = fold_case(*members.front()->truth_label);
      for (std::size_t i = 0; i < q.options.size(); ++i)
        if (fold_case(q.options[i]) == folded) q.truth = static_cast<std::int32_t>(i);
    }

    std::set<std::string> models;
    std::set<std::string> elicitations;
    for (const LogRecord* r : members) {
      if (r->options != q.options)
        throw ParseError("question " + q.id + " carries conflicting option lists in the log");
      models.insert(r->model);
      elicitations.insert(std::string(to_string(r->elicitation)));

      Response resp;
      resp.question_id = q.id;
      resp.respondent_id = r->model + "#" + std::to_string(r->sample_index);
      resp.temperature = r->temperature;
      resp.elicitation = r->elicitation;
      resp.vote = r->vote;
      resp.confidence = r->confidence;
      resp.predicted_shares = r->predicted_shares;
      resp.raw_text = r->raw_text;
      poll.responses.push_back(std::move(resp));
    }

    poll.question = std::move(q);
    poll.condition.temperature = key.temperature;
    poll.condition.models.assign(models.begin(), models.end());
    for (const auto& e : elicitations)
      poll.condition.elicitations.push_back(*elicitation_from_string(e));

    // Canonical response order regardless of arrival order in the log.
    std::sort(poll.responses.begin(), poll.responses.end(),
              [](const Response& a, const Response& b) {
                return std::tie(a.respondent_id, a.elicitation) <
                       std::tie(b.respondent_id, b.elicitation);
              });
    polls.push_back(std::move(poll));
  }
  return polls;
}

std::vector<LogRecord> records_from_poll(const Poll& poll, const std::string& model) {
  std::vector<LogRecord> out;
  std::map<std::pair<std::string, Elicitation>, int> sample_counters;
  for (const auto& resp : poll.responses) {
    LogRecord r;
    r.question_id = poll.question.id;
    r.benchmark = poll.question.benchmark;
    r.model = model;
    r.temperature = resp.temperature;
    r.elicitation = resp.elicitation;
    r.sample_index = sample_counters[{model, resp.elicitation}]++;
    r.options = poll.question.options;
    if (poll.question.truth)
      r.truth_label = poll.question.options[static_cast<std::size_t>(*poll.question.truth)];
    r.vote = resp.vote;
    r.confidence = resp.confidence;
    r.predicted_shares = resp.predicted_shares;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace crowdlab
