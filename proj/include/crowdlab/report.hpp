#pragma once

#include <string>
#include <vector>

#include "crowdlab/decisions.hpp"
#include "crowdlab/diagnose.hpp"

namespace crowdlab {

// Renders the report bundle into out_dir:
//   accuracy.csv   one row per benchmark x crowd x method, point + CI bounds
//   report.json    provenance (input hashes, seeds, version) + the tables
//   *.svg          reliability diagrams and consensus curves, when with_svg
// Returns the paths written. Output is a pure function of the two input
// files, so reruns are byte-identical.
std::vector<std::string> write_report(const std::string& decisions_path,
                                      const std::string& diagnostics_path,
                                      const std::string& out_dir, bool with_svg);

// The accuracy table alone, as CSV text.
std::string accuracy_csv(const DiagnosticsReport& report);

}  // namespace crowdlab
