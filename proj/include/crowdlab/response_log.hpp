#pragma once

#include <cstdint>
#include <mutex>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "crowdlab/types.hpp"

namespace crowdlab {

// One line of the response log. Records are self-describing: they carry the
// question's option labels and truth so polls can be rebuilt from the log
// alone. `error` is set when the request ultimately failed after retries.
struct LogRecord {
  std::string question_id;
  std::string benchmark;
  std::string model;
  double temperature = 0.0;
  Elicitation elicitation = Elicitation::Direct;
  int sample_index = 0;
  std::vector<std::string> options;
  std::optional<std::string> truth_label;
  std::optional<std::string> raw_text;
  Vote vote;
  std::optional<double> confidence;
  std::optional<std::vector<double>> predicted_shares;
  std::vector<std::string> parse_flags;
  std::string timestamp;  // ISO-8601 UTC; empty for synthetic records
  int retry_count = 0;
  std::optional<std::string> error;
};

// (question_id, model, temperature, elicitation, sample_index) — unique
// within a log.
std::string record_key(const LogRecord& r);

std::string record_to_jsonl(const LogRecord& r);
LogRecord record_from_jsonl(const std::string& line);

// Append-only single-writer sink; one flushed line per record.
class LogWriter {
 public:
  explicit LogWriter(const std::string& path, bool append = true);
  void append(const LogRecord& r);

 private:
  std::mutex mu_;
  std::ofstream out_;
};

struct ReadStats {
  std::size_t records = 0;
  std::size_t corrupt = 0;           // skipped, warned
  std::size_t truncated_tail = 0;    // 1 when the final line was incomplete
  std::size_t parse_mismatches = 0;  // stored fields disagree with a re-parse of raw_text
};

// Reads a log, skipping corrupt lines with a warning and tolerating a
// truncated final line. When verify_parse is set, every record with raw_text
// is re-parsed and compared against its stored fields (the parser is
// deterministic, so mismatches indicate a damaged log).
std::vector<LogRecord> read_log(const std::string& path, ReadStats* stats = nullptr,
                                bool verify_parse = true);

enum class Grouping {
  PerModel,  // one poll per (question, model, temperature)
  Ensemble,  // one poll per (question, temperature), pooled across models
};

// Rebuilds polls from log records. Error records and records from other
// groupings are carried into the matching poll as responses (error records
// parse to unclear votes, so share math already excludes them). Output order
// is canonical: benchmark, question id, model, temperature.
std::vector<Poll> polls_from_log(const std::vector<LogRecord>& records, Grouping grouping);

// Responses -> records, for writing synthetic polls in the same log format.
// Synthetic records carry no raw_text or timestamp.
std::vector<LogRecord> records_from_poll(const Poll& poll, const std::string& model);

}  // namespace crowdlab
