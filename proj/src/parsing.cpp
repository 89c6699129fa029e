#include "crowdlab/parsing.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace crowdlab {

namespace {

bool is_word_char(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return std::isalnum(u) != 0 || c == '_';
}

bool is_space(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return std::isspace(u) != 0;
}

// First word-boundary occurrence of `needle` in `haystack`; both must already
// be case folded. npos when absent.
std::size_t find_word(const std::string& haystack, const std::string& needle) {
  if (needle.empty()) return std::string::npos;
  std::size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string::npos) {
    const bool left_ok = pos == 0 || !is_word_char(haystack[pos - 1]);
    const std::size_t end = pos + needle.size();
    const bool right_ok = end >= haystack.size() || !is_word_char(haystack[end]);
    if (left_ok && right_ok) return pos;
    ++pos;
  }
  return std::string::npos;
}

// Case-insensitive scan for "<label>:? \s* <digits>", the fixed count
// pattern. The label may match inside a larger word, exactly as the bare
// pattern would. Returns the digit run, or nullopt.
std::optional<std::string> find_count(const std::string& folded_text,
                                      const std::string& folded_label) {
  std::size_t pos = 0;
  while ((pos = folded_text.find(folded_label, pos)) != std::string::npos) {
    std::size_t i = pos + folded_label.size();
    if (i < folded_text.size() && folded_text[i] == ':') ++i;
    while (i < folded_text.size() && is_space(folded_text[i])) ++i;
    std::size_t digits_begin = i;
    while (i < folded_text.size() && std::isdigit(static_cast<unsigned char>(folded_text[i])))
      ++i;
    if (i > digits_begin) return folded_text.substr(digits_begin, i - digits_begin);
    ++pos;
  }
  return std::nullopt;
}

void add_flag(std::vector<std::string>* flags, const char* flag) {
  if (flags) flags->emplace_back(flag);
}

// Digit runs longer than 3 are rejected as if the field were missing.
std::optional<int> accept_count(const std::optional<std::string>& digits,
                                std::vector<std::string>* flags) {
  if (!digits) return std::nullopt;
  if (digits->size() > 3) {
    add_flag(flags, "overlong-number-rejected");
    return std::nullopt;
  }
  return std::stoi(*digits);
}

double clamp_unit(double v, bool* clamped = nullptr) {
  if (v < 0.0) {
    if (clamped) *clamped = true;
    return 0.0;
  }
  if (v > 1.0) {
    if (clamped) *clamped = true;
    return 1.0;
  }
  return v;
}

}  // namespace

Vote parse_direct(std::string_view text, const std::vector<std::string>& options) {
  const std::string folded = fold_case(text);
  std::size_t best_pos = std::string::npos;
  Vote best;
  for (std::size_t i = 0; i < options.size(); ++i) {
    const std::size_t pos = find_word(folded, fold_case(options[i]));
    if (pos != std::string::npos && pos < best_pos) {
      best_pos = pos;
      best = static_cast<std::int32_t>(i);
    }
  }
  return best;
}

double parse_prediction(std::string_view text, const std::vector<std::string>& options,
                        std::vector<std::string>* flags) {
  if (options.size() != 2)
    throw InvariantViolation("prediction parsing is defined for binary questions");
  const std::string folded = fold_case(text);
  const std::optional<int> first = accept_count(find_count(folded, fold_case(options[0])), flags);
  const std::optional<int> second = accept_count(find_count(folded, fold_case(options[1])), flags);

  if (first && second) {
    const int sum = *first + *second;
    if (sum == 0) {
      add_flag(flags, "missing-prediction-default");
      return 0.5;
    }
    if (*first + *second != 100) add_flag(flags, "normalized-prediction");
    return static_cast<double>(*first) / static_cast<double>(sum);
  }
  if (first) {
    bool clamped = false;
    const double share = clamp_unit(static_cast<double>(*first) / 100.0, &clamped);
    if (clamped) add_flag(flags, "clamped-prediction");
    return share;
  }
  if (second) {
    bool clamped = false;
    const double share = clamp_unit(1.0 - static_cast<double>(*second) / 100.0, &clamped);
    if (clamped) add_flag(flags, "clamped-prediction");
    add_flag(flags, "complement-prediction");
    return share;
  }
  add_flag(flags, "missing-prediction-default");
  return 0.5;
}

std::pair<Vote, double> parse_confidence(std::string_view text,
                                         const std::vector<std::string>& options,
                                         std::vector<std::string>* flags) {
  const std::string folded = fold_case(text);

  // "Answer:? \s* (<label>|...)" with the question's own labels.
  Vote vote;
  {
    static const std::string kAnswer = "answer";
    std::size_t pos = 0;
    while (!vote && (pos = folded.find(kAnswer, pos)) != std::string::npos) {
      std::size_t i = pos + kAnswer.size();
      if (i < folded.size() && folded[i] == ':') ++i;
      while (i < folded.size() && is_space(folded[i])) ++i;
      for (std::size_t o = 0; o < options.size(); ++o) {
        const std::string label = fold_case(options[o]);
        if (folded.compare(i, label.size(), label) == 0) {
          vote = static_cast<std::int32_t>(o);
          break;
        }
      }
      ++pos;
    }
  }
  if (!vote) vote = parse_direct(text, options);
  if (!vote) add_flag(flags, "missing-answer");

  double confidence = 0.5;
  const std::optional<int> raw = accept_count(find_count(folded, "confidence"), flags);
  if (raw) {
    bool clamped = false;
    confidence = clamp_unit(static_cast<double>(*raw) / 100.0, &clamped);
    if (clamped) add_flag(flags, "clamped-confidence");
  } else {
    add_flag(flags, "missing-confidence-default");
  }
  return {vote, confidence};
}

Vote parse_forced_choice(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = static_cast<char>(
        std::toupper(static_cast<unsigned char>(text[i])));
    if (c < 'A' || c > 'D') continue;
    const bool left_ok = i == 0 || !is_word_char(text[i - 1]);
    const bool right_ok = i + 1 >= text.size() || !is_word_char(text[i + 1]);
    if (left_ok && right_ok) return static_cast<std::int32_t>(c - 'A');
  }
  return std::nullopt;
}

bool is_forced_choice_options(const std::vector<std::string>& options) {
  static const std::vector<std::string> kLetters = {"a", "b", "c", "d"};
  if (options.size() != 4) return false;
  for (std::size_t i = 0; i < 4; ++i)
    if (fold_case(options[i]) != kLetters[i]) return false;
  return true;
}

ParseOutcome parse_response(std::string_view text, Elicitation kind,
                            const std::vector<std::string>& options) {
  ParseOutcome out;
  switch (kind) {
    case Elicitation::Direct:
      out.vote = is_forced_choice_options(options) ? parse_forced_choice(text)
                                                   : parse_direct(text, options);
      break;
    case Elicitation::Prediction: {
      const double share = parse_prediction(text, options, &out.flags);
      out.predicted_shares = std::vector<double>{share, 1.0 - share};
      break;
    }
    case Elicitation::Confidence: {
      auto [vote, confidence] = parse_confidence(text, options, &out.flags);
      out.vote = vote;
      out.confidence = confidence;
      break;
    }
  }
  return out;
}

}  // namespace crowdlab
