#pragma once

#include <stdexcept>
#include <string>

namespace crowdlab {

// Base class for every domain error raised by this library. `code()` is a
// stable machine-readable name used in error records and CLI output.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

#define CROWDLAB_DEFINE_ERROR(Name, default_msg)                 \
  class Name : public Error {                                    \
   public:                                                       \
    Name() : Error(#Name, default_msg) {}                        \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

CROWDLAB_DEFINE_ERROR(NoClearVotes, "poll has no clear votes");
CROWDLAB_DEFINE_ERROR(NoPredictions, "poll has no prediction responses");
CROWDLAB_DEFINE_ERROR(NoConfidences, "poll has no voted responses with confidence");
CROWDLAB_DEFINE_ERROR(MissingTruth, "question has no truth label");
CROWDLAB_DEFINE_ERROR(MissingElicitation, "poll lacks the elicitation this measure needs");
CROWDLAB_DEFINE_ERROR(EmptyInput, "input is empty");
CROWDLAB_DEFINE_ERROR(TooFewItems, "need at least two items");
CROWDLAB_DEFINE_ERROR(KeyMismatch, "the two conditions cover different (question, model) keys");
CROWDLAB_DEFINE_ERROR(InvalidSimplex, "shares are not a probability vector");
CROWDLAB_DEFINE_ERROR(EvenSize, "analytic majority accuracy requires odd crowd sizes");
CROWDLAB_DEFINE_ERROR(InvariantViolation, "domain invariant violated");
CROWDLAB_DEFINE_ERROR(ParseError, "malformed input file");
CROWDLAB_DEFINE_ERROR(DuplicateId, "duplicate question id");
CROWDLAB_DEFINE_ERROR(UnsupportedOptions, "no prompt template for this option set");
CROWDLAB_DEFINE_ERROR(ConfigError, "invalid configuration");
CROWDLAB_DEFINE_ERROR(IoError, "file i/o failed");

#undef CROWDLAB_DEFINE_ERROR

}  // namespace crowdlab
