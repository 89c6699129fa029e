#include "crowdlab/prompts.hpp"

#include <algorithm>
#include <cctype>

#include "crowdlab/parsing.hpp"

namespace crowdlab {

namespace {

// The templates are fixed text; only the question and the two option labels
// are substituted. Editing them changes the wire protocol, so don't.
constexpr const char* kDirect = "%Q%\nAnswer with just %1% or %2%:";
constexpr const char* kDirectCom2Sense =
    "%Q%\nDoes this scenario make sense? Answer with just TRUE (makes sense) or FALSE (doesn't "
    "make sense):";
constexpr const char* kDirectFuture =
    "%Q%\nYou may not know the answer for certain, but please make your best prediction. Answer "
    "with just %1% or %2%:";
constexpr const char* kPrediction =
    "Question: %Q%\nWhat percentage of language models will answer %1% to this question? Give "
    "just a number 0--100.\nWhat percentage will answer %2%? (should sum to 100)\nFormat: "
    "%1%:XX %2%:XX";
constexpr const char* kPredictionFutureSuffix =
    "\nNote: The answer may not be knowable for certain, but predict based on available "
    "information.";
constexpr const char* kConfidence =
    "Question: %Q%\nAnswer %1% or %2%, then rate your confidence from 0--100.\nFormat: "
    "Answer:%1% Confidence:XX or Answer:%2% Confidence:XX";
constexpr const char* kForcedChoice =
    "Here is a random sequence:\n\n%Q%\n\nNow choose one option: (A), (B), (C), or (D). Output "
    "your answer as X where X is A, B, C, or D.";

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
  return text;
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

std::string normalize_tag(const std::string& benchmark) {
  std::string tag = fold_case(benchmark);
  std::replace(tag.begin(), tag.end(), '_', '-');
  return tag;
}

bool is_binary_template_options(const Question& q) {
  if (q.options.size() != 2) return false;
  const std::string a = fold_case(q.options[0]);
  const std::string b = fold_case(q.options[1]);
  return (a == "yes" && b == "no") || (a == "true" && b == "false");
}

std::string instantiate(const char* tmpl, const Question& q) {
  std::string out = replace_all(tmpl, "%Q%", q.text);
  out = replace_all(out, "%1%", upper(q.options[0]));
  out = replace_all(out, "%2%", upper(q.options[1]));
  return out;
}

}  // namespace

std::string render_prompt(const Question& question, Elicitation kind) {
  if (is_forced_choice_options(question.options)) {
    if (kind != Elicitation::Direct)
      throw UnsupportedOptions("forced-choice questions support the direct elicitation only");
    return replace_all(kForcedChoice, "%Q%", question.text);
  }
  if (!is_binary_template_options(question))
    throw UnsupportedOptions("no template for option set of question " + question.id);

  const std::string tag = normalize_tag(question.benchmark);
  switch (kind) {
    case Elicitation::Direct:
      if (tag == "com2sense") return instantiate(kDirectCom2Sense, question);
      if (tag == "predict-the-future") return instantiate(kDirectFuture, question);
      return instantiate(kDirect, question);
    case Elicitation::Prediction: {
      std::string prompt = instantiate(kPrediction, question);
      if (tag == "predict-the-future") prompt += kPredictionFutureSuffix;
      return prompt;
    }
    case Elicitation::Confidence:
      return instantiate(kConfidence, question);
  }
  throw UnsupportedOptions("unknown elicitation");
}

}  // namespace crowdlab
