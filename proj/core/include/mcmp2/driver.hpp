#ifndef MCMP2_DRIVER_HPP
#define MCMP2_DRIVER_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcmp2/estimator.hpp"
#include "mcmp2/model.hpp"
#include "mcmp2/weights.hpp"

namespace mcmp2 {

struct RunConfig {
  std::string spinor_path;
  std::optional<long long> steps;        // total budget, split across workers
  std::optional<double> target_rel_err;  // sigma_bar / |E2|, checked at checkpoints
  int walkers = 8;
  std::uint64_t seed = 1;
  int workers = 1;
  long block_size = 100;
  long burn_in = 1000;
  std::string checkpoint_path;
  long checkpoint_interval = 5000;
  std::string trace_path;
  std::map<int, WeightParams> weight_overrides;

  void validate() const;  // exactly one stopping rule, m >= 2, ...
};

// line-oriented `key value` file, '#' comments, unknown keys rejected
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

std::uint64_t fnv1a64(std::string_view bytes);

// full config, canonical ordering; parse_config_text inverts it
std::string canonical_config_text(const RunConfig& config);
// physics-defining subset + spinor content hash; identifies mergeable runs
std::uint64_t config_hash(const RunConfig& config, std::uint64_t spinor_content_hash);
std::uint64_t hash_file_contents(const std::string& path);

struct WorkerSummary {
  int index;
  long long steps;
  double mean;
  double sigma_bar;
  double acceptance;
  double imag_ratio;  // |accumulated imag| / |accumulated real|
};

struct MergedEstimate {
  double value = 0.0;
  double sigma_bar = 0.0;
  long long total_steps = 0;
};

struct RunReport {
  MergedEstimate merged;
  std::vector<WorkerSummary> workers;
  bool stopped_on_target = false;
};

// step-count weighting; sigma_bar combined assuming worker independence
MergedEstimate merge_estimates(const std::vector<WorkerSummary>& parts);

struct RunHooks {
  long abort_after_intervals = -1;  // simulate a kill at a checkpoint boundary
};

RunReport run(const RunConfig& config, const RunHooks& hooks = {});
RunReport resume(const std::string& checkpoint_path, const RunHooks& hooks = {});

struct CheckpointInfo {
  std::uint64_t config_hash;
  RunConfig config;
  std::vector<WorkerSummary> workers;
};
CheckpointInfo read_checkpoint_info(const std::string& path);

// combine independent runs; refuses mismatched config hashes
MergedEstimate merge_checkpoint_files(const std::vector<std::string>& paths,
                                      std::vector<WorkerSummary>* parts = nullptr);

std::string format_report(const RunReport& report);

}  // namespace mcmp2

#endif
