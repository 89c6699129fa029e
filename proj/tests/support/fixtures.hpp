#pragma once

// Loader + runner for the parsing conformance fixture file. Shared by the
// unit suite and the acceptance suite so both exercise the same cases.

#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crowdlab/parsing.hpp"
#include "crowdlab/types.hpp"

namespace crowdlab::testing {

struct ParsingFixture {
  std::string kind;
  std::vector<std::string> options;
  std::string text;
  std::optional<std::string> expected_vote;  // label; nullopt = unclear expected
  std::optional<double> expected_confidence;
  std::optional<double> expected_share;
};

inline std::vector<ParsingFixture> load_parsing_fixtures(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture file: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  std::vector<ParsingFixture> out;
  for (const auto& item : j) {
    ParsingFixture f;
    f.kind = item.at("kind").get<std::string>();
    if (item.contains("options")) f.options = item.at("options").get<std::vector<std::string>>();
    f.text = item.at("text").get<std::string>();
    if (item.contains("vote") && !item.at("vote").is_null())
      f.expected_vote = item.at("vote").get<std::string>();
    if (item.contains("confidence")) f.expected_confidence = item.at("confidence").get<double>();
    if (item.contains("canonical_share")) f.expected_share = item.at("canonical_share").get<double>();
    out.push_back(std::move(f));
  }
  return out;
}

// Runs one fixture; returns an empty string on success or a description of
// the mismatch.
inline std::string run_parsing_fixture(const ParsingFixture& f) {
  static const std::vector<std::string> kLetters = {"A", "B", "C", "D"};
  auto label_of = [](const std::vector<std::string>& options, Vote v) -> std::optional<std::string> {
    if (!v) return std::nullopt;
    return options[static_cast<std::size_t>(*v)];
  };
  auto mismatch = [&](const std::string& what) { return f.kind + " \"" + f.text + "\": " + what; };

  if (f.kind == "direct") {
    Vote got = parse_direct(f.text, f.options);
    if (label_of(f.options, got) != f.expected_vote) return mismatch("wrong vote");
  } else if (f.kind == "prediction") {
    double got = parse_prediction(f.text, f.options);
    if (std::abs(got - *f.expected_share) > 1e-12) return mismatch("wrong share");
  } else if (f.kind == "confidence") {
    auto [vote, conf] = parse_confidence(f.text, f.options);
    if (label_of(f.options, vote) != f.expected_vote) return mismatch("wrong vote");
    if (std::abs(conf - *f.expected_confidence) > 1e-12) return mismatch("wrong confidence");
  } else if (f.kind == "forced_choice") {
    Vote got = parse_forced_choice(f.text);
    if (label_of(kLetters, got) != f.expected_vote) return mismatch("wrong letter");
  } else {
    return "unknown fixture kind: " + f.kind;
  }
  return {};
}

}  // namespace crowdlab::testing
