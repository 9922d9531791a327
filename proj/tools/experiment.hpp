#pragma once

#include <string>

namespace rgcost::cli {

/// Runs an experiment spec (JSON) and writes outputs plus manifest.json into
/// `out_dir` (or the spec's output dir). Returns the exit status: 0 when
/// every analysis succeeded, otherwise the largest per-analysis code.
int run_experiment(const std::string& spec_path, const std::string& out_dir);

/// Recomputes the digests listed in a manifest. Returns 0 when all match.
int check_manifest(const std::string& manifest_path);

}  // namespace rgcost::cli
