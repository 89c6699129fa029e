#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crowdlab/types.hpp"

namespace crowdlab {

// Everything a raw model reply can yield, plus a record of which defaults
// fired while parsing it (e.g. "missing-confidence-default").
struct ParseOutcome {
  Vote vote;
  std::optional<double> confidence;
  std::optional<std::vector<double>> predicted_shares;
  std::vector<std::string> flags;
};

// Case-folded word-boundary search of the option labels over the whole text.
// Exactly one label present -> that option. Several present -> the one whose
// first occurrence is earliest. None -> unclear. Word chars are [a-z0-9_], so
// "no" never matches inside "not" or "know".
Vote parse_direct(std::string_view text, const std::vector<std::string>& options);

// Scans for "<LABEL>:? <digits>" (the label of each of the two options, an
// optional colon, whitespace, then an integer). Both counts found and
// positive -> first/(first+second). Only the first option's count found ->
// value/100 clamped to [0,1]. Only the second's -> 1 - value/100 clamped.
// Neither found, or both zero -> 0.5. Integers longer than 3 digits are
// rejected as if missing. Appends applied-default flags when given.
double parse_prediction(std::string_view text, const std::vector<std::string>& options,
                        std::vector<std::string>* flags = nullptr);

// Parses "Answer:<label>" and "Confidence:<digits>". The answer falls back
// to parse_direct over the whole text; a missing confidence defaults to 0.5;
// a missing answer yields unclear (such responses are excluded from
// confidence-weighted voting downstream).
std::pair<Vote, double> parse_confidence(std::string_view text,
                                         const std::vector<std::string>& options,
                                         std::vector<std::string>* flags = nullptr);

// First standalone letter among A-D, case-insensitive; parenthesized forms
// like "(C)" count. Returns the option index 0..3, or unclear.
Vote parse_forced_choice(std::string_view text);

// True when the options are exactly the single letters A..D (any case), the
// shape used by forced-choice control questions.
bool is_forced_choice_options(const std::vector<std::string>& options);

// Applies the rule matching the elicitation kind. Direct answers on
// forced-choice option sets go through parse_forced_choice.
ParseOutcome parse_response(std::string_view text, Elicitation kind,
                            const std::vector<std::string>& options);

}  // namespace crowdlab
