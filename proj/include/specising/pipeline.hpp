#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "specising/io.hpp"
#include "specising/reduction.hpp"

namespace specising {

// Deterministic JSON rendering for reports: objects sorted by key (nlohmann
// default), floating-point numbers at 17 significant digits so doubles
// round-trip and regression diffs are byte-stable.
std::string dump_json_17(const nlohmann::json& doc, int indent = 2);

struct PipelineConfig {
  GraphFile graph;
  ReductionParams params;
  double delta = 0.0;   // assumed oracle error per site on log Z
  std::string out_dir;  // when set, one JSON file per stage plus summary.json
  int threads = 0;
  double tol = 1e-9;
  int outer_cap_bits = 26;
};

struct PipelineResult {
  bool ok = false;
  std::string failed_stage;  // empty on success
  std::string error;
  std::vector<std::pair<std::string, nlohmann::json>> stages;
  nlohmann::json summary;
};

// meanfield -> gadget verification -> construction -> spectral certificate ->
// exact partition functions -> ratio window -> maxcut bracketing.
// A stage failure aborts the run; completed stage reports are preserved.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace specising
