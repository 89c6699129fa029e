#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crowdlab/openai_client.hpp"
#include "crowdlab/types.hpp"

#include <nlohmann/json_fwd.hpp>

namespace crowdlab {

// Everything one sampling run needs. The seed only orders bookkeeping;
// endpoint-side sampling is not seedable.
struct RunManifest {
  std::string benchmark_path;
  std::vector<EndpointConfig> endpoints;
  SamplingConfig sampling;
  std::string output_log;
  std::uint64_t seed = 0;
};

RunManifest manifest_from_json(const nlohmann::json& j);
nlohmann::json manifest_to_json(const RunManifest& m);
RunManifest load_manifest(const std::string& path);

struct SamplingStats {
  std::size_t planned = 0;    // full grid size
  std::size_t skipped = 0;    // keys already present in the log
  std::size_t attempted = 0;  // requests actually issued
  std::size_t succeeded = 0;
  std::size_t failed = 0;     // written as error records
};

// Runs the sampling grid (question x endpoint x temperature x elicitation x
// sample) against the manifest's endpoints, appending one record per cell to
// the output log. Present keys are skipped, so reruns are idempotent.
// Requests are bounded per endpoint by max_in_flight; the log writer is a
// single serialized sink. Configuration problems (unreadable benchmark,
// unrenderable prompts, bad endpoint config) abort before any request.
SamplingStats run_sampling(const RunManifest& manifest);

}  // namespace crowdlab
