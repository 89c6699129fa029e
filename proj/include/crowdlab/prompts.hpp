#pragma once

#include <string>

#include "crowdlab/types.hpp"

namespace crowdlab {

// Instantiates the fixed prompt template for (question, elicitation),
// byte-exact. Binary YES/NO and TRUE/FALSE questions have templates for all
// three elicitations, with benchmark-specific wording for "com2sense" and
// "predict-the-future" tags. Forced-choice A-D questions only support the
// direct elicitation. Throws UnsupportedOptions otherwise.
std::string render_prompt(const Question& question, Elicitation kind);

}  // namespace crowdlab
