#include "crowdlab/benchmark_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "crowdlab/json_util.hpp"

namespace crowdlab {

namespace {

Question question_from_json(const nlohmann::json& j) {
  Question q;
  q.id = j.at("id").get<std::string>();
  q.text = j.at("text").get<std::string>();
  q.options = j.at("options").get<std::vector<std::string>>();
  q.benchmark = j.at("benchmark").get<std::string>();
  if (j.contains("truth") && !j.at("truth").is_null()) {
    const std::string label = j.at("truth").get<std::string>();
    const std::string folded = fold_case(label);
    for (std::size_t i = 0; i < q.options.size(); ++i) {
      if (fold_case(q.options[i]) == folded) {
        q.truth = static_cast<std::int32_t>(i);
        break;
      }
    }
    if (!q.truth)
      throw ParseError("question " + q.id + ": truth label '" + label +
                       "' is not one of the options");
  }
  if (j.contains("notes") && !j.at("notes").is_null())
    q.notes = j.at("notes").get<std::string>();
  validate(q);
  return q;
}

nlohmann::json question_to_json(const Question& q) {
  nlohmann::json j;
  j["id"] = q.id;
  j["text"] = q.text;
  j["options"] = q.options;
  j["benchmark"] = q.benchmark;
  j["truth"] = q.truth ? nlohmann::json(q.options[static_cast<std::size_t>(*q.truth)])
                       : nlohmann::json(nullptr);
  if (q.notes) j["notes"] = *q.notes;
  return j;
}

}  // namespace

std::vector<Question> load_benchmark(const std::string& path) {
  const std::string content = read_file(path);

  std::vector<Question> questions;
  // A file whose first non-space byte is '[' is a single JSON array;
  // anything else is treated as line-delimited records.
  std::size_t first = content.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && content[first] == '[') {
    nlohmann::json arr;
    try {
      arr = nlohmann::json::parse(content);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path + ": " + e.what());
    }
    for (const auto& item : arr) questions.push_back(question_from_json(item));
  } else {
    std::istringstream in(content);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        questions.push_back(question_from_json(nlohmann::json::parse(line)));
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
  }

  std::set<std::string> ids;
  for (const auto& q : questions)
    if (!ids.insert(q.id).second) throw DuplicateId("duplicate question id: " + q.id);
  return questions;
}

void write_benchmark(const std::string& path, const std::vector<Question>& questions) {
  std::ostringstream out;
  for (const auto& q : questions) out << question_to_json(q).dump() << '\n';
  write_file(path, out.str());
}

}  // namespace crowdlab
