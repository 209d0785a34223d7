#pragma once

#include "wt1/pipeline.hpp"

#include <string>

namespace wt1 {

std::string sha256_hex(const std::string& data);

// Deterministic report body: identical config + version => identical bytes.
// Timings never enter the report; they go to a separate trailer file.
std::string render_report(const RunConfig& cfg, const std::string& raw_config,
                          const Tower& T,
                          const VerdictOutcome* verdicts,
                          const BatchResult* coefficients);

}  // namespace wt1
