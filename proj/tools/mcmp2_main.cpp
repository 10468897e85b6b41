#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcmp2/driver.hpp"
#include "mcmp2/oracle.hpp"

namespace {

void apply_weight_flags(mcmp2::RunConfig& cfg, const std::vector<std::string>& weights) {
  for (const auto& spec : weights) {
    std::istringstream is(spec);
    std::string sym;
    mcmp2::WeightParams w{};
    if (!(is >> sym >> w.c1 >> w.zeta1 >> w.c2 >> w.zeta2))
      throw CLI::ValidationError("--weight expects \"El c1 zeta1 c2 zeta2\"");
    cfg.weight_overrides[mcmp2::atomic_number(sym)] = w;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic second-order perturbation energies for spinor references"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "start a Monte Carlo integration");
  std::string config_path, spinors, checkpoint, trace;
  long long steps = 0;
  double target = 0;
  int walkers = 0, workers = 0;
  long blocksize = 0, burnin = -1, interval = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> weight_flags;
  run_cmd->add_option("--config", config_path, "configuration file");
  run_cmd->add_option("--spinors", spinors, "SPINOR-TEXT reference file");
  auto* steps_opt = run_cmd->add_option("--steps", steps, "total MC step budget");
  auto* target_opt =
      run_cmd->add_option("--target-rel-err", target, "stop when sigma_bar/|E2| reaches this");
  run_cmd->add_option("--walkers", walkers, "electron-pair walkers per worker");
  run_cmd->add_option("--seed", seed, "base random seed");
  run_cmd->add_option("--workers", workers, "independent workers");
  run_cmd->add_option("--blocksize", blocksize, "blocking analysis block size");
  run_cmd->add_option("--burnin", burnin, "burn-in steps before accumulation");
  run_cmd->add_option("--checkpoint", checkpoint, "checkpoint file path");
  run_cmd->add_option("--checkpoint-interval", interval, "steps between checkpoints");
  run_cmd->add_option("--trace", trace, "convergence trace file path");
  run_cmd->add_option("--weight", weight_flags, "per-element weight parameters \"El c1 z1 c2 z2\"");

  // resume
  auto* resume_cmd = app.add_subcommand("resume", "continue a checkpointed run");
  std::string resume_path;
  resume_cmd->add_option("--checkpoint", resume_path, "checkpoint file")->required();

  // merge
  auto* merge_cmd = app.add_subcommand("merge", "combine independent checkpointed runs");
  std::vector<std::string> merge_files;
  merge_cmd->add_option("files", merge_files, "checkpoint files")->required();

  // fixture
  auto* fixture_cmd = app.add_subcommand("fixture", "emit a reference fixture with its oracle E2");
  std::string fixture_name, fixture_dir = ".";
  fixture_cmd->add_option("name", fixture_name, "h2_svp, he_dz, syn4c or all")->required();
  fixture_cmd->add_option("--output", fixture_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      mcmp2::RunConfig cfg;
      if (!config_path.empty()) cfg = mcmp2::parse_config_file(config_path);
      if (!spinors.empty()) cfg.spinor_path = spinors;
      if (steps_opt->count()) cfg.steps = steps;
      if (target_opt->count()) cfg.target_rel_err = target;
      if (walkers) cfg.walkers = walkers;
      if (seed) cfg.seed = seed;
      if (workers) cfg.workers = workers;
      if (blocksize) cfg.block_size = blocksize;
      if (burnin >= 0) cfg.burn_in = burnin;
      if (!checkpoint.empty()) cfg.checkpoint_path = checkpoint;
      if (interval) cfg.checkpoint_interval = interval;
      if (!trace.empty()) cfg.trace_path = trace;
      apply_weight_flags(cfg, weight_flags);
      cfg.validate();
      const mcmp2::RunReport report = mcmp2::run(cfg);
      std::cout << mcmp2::format_report(report);
    } else if (*resume_cmd) {
      const mcmp2::RunReport report = mcmp2::resume(resume_path);
      std::cout << mcmp2::format_report(report);
    } else if (*merge_cmd) {
      std::vector<mcmp2::WorkerSummary> parts;
      const mcmp2::MergedEstimate merged = mcmp2::merge_checkpoint_files(merge_files, &parts);
      std::cout << "E2        = " << mcmp2::format_double(merged.value) << " hartree\n";
      std::cout << "sigma_bar = " << mcmp2::format_double(merged.sigma_bar) << " hartree\n";
      std::cout << "steps     = " << merged.total_steps << " (" << parts.size() << " records)\n";
    } else if (*fixture_cmd) {
      std::vector<std::string> names;
      if (fixture_name == "all")
        names = mcmp2::fixture_names();
      else
        names.push_back(fixture_name);
      for (const auto& name : names) {
        const mcmp2::Fixture fx = mcmp2::write_fixture(name, fixture_dir);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.11e", fx.e2);
        std::cout << name << ": E2 = " << buf << " hartree ("
                  << (fixture_dir.empty() ? "." : fixture_dir) << "/" << name << ".spinor)\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
