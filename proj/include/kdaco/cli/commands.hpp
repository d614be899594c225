#pragma once

// Subcommand implementations. Each returns the process exit code; library
// errors propagate as kdaco::Error for the caller to report.

#include <iosfwd>
#include <optional>
#include <string>

#include "kdaco/cli/config.hpp"
#include "kdaco/cli/experiments.hpp"
#include "kdaco/selection.hpp"
#include "kdaco/temperature.hpp"

namespace kdaco::cli {

// --- config mapping -------------------------------------------------------

tinynet::SyntheticSpec data_spec_from_config(const RunConfig& cfg);
std::optional<NoiseSpec> noise_from_config(const RunConfig& cfg);
temperature::TemperaturePolicy policy_from_config(const RunConfig& cfg);
DistillSetup distill_setup_from_config(const RunConfig& cfg);
selection::AcoConfig aco_from_config(const RunConfig& cfg);
selection::PsoConfig pso_from_config(const RunConfig& cfg);

// Dataset named by [data] file, or generated (and noised) from [data].
tinynet::SyntheticDataset dataset_from_config(const RunConfig& cfg);

// Pool definition (JSON):
//   {"seed": 7, "candidates": [
//      {"name": "a", "stub_score": 0.9, "heuristic": 3},
//      {"name": "b", "hidden": [16, 16], "learning_rate": 0.05, "epochs": 10}]}
selection::CandidatePool load_pool(const std::string& path,
                                   std::shared_ptr<const tinynet::SyntheticDataset> data,
                                   std::optional<std::uint64_t> seed_override);

// --out wins over [out] dir; throws InvalidConfig when neither is given.
std::string output_dir(const RunConfig& cfg, const std::string& flag);

// --- subcommands ----------------------------------------------------------

int cmd_gen_data(const RunConfig& cfg, const std::string& out_dir, std::ostream& out);

int cmd_select(const RunConfig& cfg, const std::string& strategy, const std::string& out_dir,
               std::ostream& out);

// ablation: "" (single run with [policy]), "table10" or "table11".
int cmd_distill(const RunConfig& cfg, const std::string& ablation, const std::string& out_dir,
                std::ostream& out);

int cmd_evaluate(const std::string& predictions_path, const std::string& labels_path,
                 const std::string& out_dir, std::ostream& out, std::ostream& err);

// Recomputes the worked examples; `tamper` perturbs one expected value so the
// failure path can be exercised. Returns nonzero if any check fails.
int cmd_repro_examples(bool tamper, const std::string& out_dir, std::ostream& out);

}  // namespace kdaco::cli
