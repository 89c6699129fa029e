#pragma once

#include <string>
#include <vector>

#include "crowdlab/types.hpp"

namespace crowdlab {

// Loads a benchmark file: either one JSON object per line or a single JSON
// array. Each record carries {id, text, options[], truth (option label or
// null), benchmark} and an optional notes string. Questions are validated
// and duplicate ids rejected. ParseError messages carry the line number.
std::vector<Question> load_benchmark(const std::string& path);

// Counterpart writer (JSONL), used for fixtures and control sets.
void write_benchmark(const std::string& path, const std::vector<Question>& questions);

}  // namespace crowdlab
