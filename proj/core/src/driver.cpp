#include "mcmp2/driver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mcmp2/sampler.hpp"

namespace mcmp2 {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::string clean = line;
  if (auto pos = clean.find('#'); pos != std::string::npos) clean.erase(pos);
  std::istringstream is(clean);
  std::vector<std::string> toks;
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

long long to_ll(const std::string& tok, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(tok, &used);
    if (used == tok.size()) return v;
  } catch (const std::exception&) {
  }
  throw std::runtime_error("config: key '" + key + "' expects an integer, got '" + tok + "'");
}

double to_d(const std::string& tok, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used == tok.size()) return v;
  } catch (const std::exception&) {
  }
  throw std::runtime_error("config: key '" + key + "' expects a number, got '" + tok + "'");
}

}  // namespace

void RunConfig::validate() const {
  if (spinor_path.empty()) throw std::runtime_error("config: no spinor file given");
  if (steps.has_value() == target_rel_err.has_value())
    throw std::runtime_error(
        "config: exactly one stopping rule required (steps or target-rel-err)");
  if (steps && *steps < 1) throw std::runtime_error("config: steps must be positive");
  if (target_rel_err && !(*target_rel_err > 0))
    throw std::runtime_error("config: target-rel-err must be positive");
  if (walkers < 2) throw std::runtime_error("config: walkers must be >= 2");
  if (workers < 1) throw std::runtime_error("config: workers must be >= 1");
  if (block_size < 1) throw std::runtime_error("config: blocksize must be >= 1");
  if (burn_in < 0) throw std::runtime_error("config: burnin must be >= 0");
  if (checkpoint_interval < 1) throw std::runtime_error("config: checkpoint-interval must be >= 1");
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& key = toks[0];
    auto want = [&](std::size_t n) {
      if (toks.size() != n + 1)
        throw std::runtime_error("config: key '" + key + "' expects " + std::to_string(n) +
                                 " value(s)");
    };
    if (key == "spinors") {
      want(1);
      cfg.spinor_path = toks[1];
    } else if (key == "steps") {
      want(1);
      cfg.steps = to_ll(toks[1], key);
    } else if (key == "target-rel-err") {
      want(1);
      cfg.target_rel_err = to_d(toks[1], key);
    } else if (key == "walkers") {
      want(1);
      cfg.walkers = int(to_ll(toks[1], key));
    } else if (key == "seed") {
      want(1);
      cfg.seed = std::uint64_t(to_ll(toks[1], key));
    } else if (key == "workers") {
      want(1);
      cfg.workers = int(to_ll(toks[1], key));
    } else if (key == "blocksize") {
      want(1);
      cfg.block_size = long(to_ll(toks[1], key));
    } else if (key == "burnin") {
      want(1);
      cfg.burn_in = long(to_ll(toks[1], key));
    } else if (key == "checkpoint") {
      want(1);
      cfg.checkpoint_path = toks[1];
    } else if (key == "checkpoint-interval") {
      want(1);
      cfg.checkpoint_interval = long(to_ll(toks[1], key));
    } else if (key == "trace") {
      want(1);
      cfg.trace_path = toks[1];
    } else if (key == "weight") {
      want(5);
      const int z = atomic_number(toks[1]);
      cfg.weight_overrides[z] = {to_d(toks[2], key), to_d(toks[3], key), to_d(toks[4], key),
                                 to_d(toks[5], key)};
    } else {
      throw std::runtime_error("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string canonical_config_text(const RunConfig& config) {
  std::ostringstream os;
  os << "blocksize " << config.block_size << "\n";
  os << "burnin " << config.burn_in << "\n";
  if (!config.checkpoint_path.empty()) os << "checkpoint " << config.checkpoint_path << "\n";
  os << "checkpoint-interval " << config.checkpoint_interval << "\n";
  os << "seed " << config.seed << "\n";
  os << "spinors " << config.spinor_path << "\n";
  if (config.steps) os << "steps " << *config.steps << "\n";
  if (config.target_rel_err)
    os << "target-rel-err " << format_double(*config.target_rel_err) << "\n";
  if (!config.trace_path.empty()) os << "trace " << config.trace_path << "\n";
  os << "walkers " << config.walkers << "\n";
  for (const auto& [z, w] : config.weight_overrides)
    os << "weight " << element_symbol(z) << ' ' << format_double(w.c1) << ' '
       << format_double(w.zeta1) << ' ' << format_double(w.c2) << ' ' << format_double(w.zeta2)
       << "\n";
  os << "workers " << config.workers << "\n";
  return os.str();
}

std::uint64_t config_hash(const RunConfig& config, std::uint64_t spinor_content_hash) {
  std::ostringstream os;
  os << "blocksize " << config.block_size << "\n";
  os << "burnin " << config.burn_in << "\n";
  os << "spinorhash " << spinor_content_hash << "\n";
  os << "walkers " << config.walkers << "\n";
  for (const auto& [z, w] : config.weight_overrides)
    os << "weight " << element_symbol(z) << ' ' << format_double(w.c1) << ' '
       << format_double(w.zeta1) << ' ' << format_double(w.c2) << ' ' << format_double(w.zeta2)
       << "\n";
  return fnv1a64(os.str());
}

std::uint64_t hash_file_contents(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file for hashing: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string s = ss.str();
  return fnv1a64(s);
}

MergedEstimate merge_estimates(const std::vector<WorkerSummary>& parts) {
  if (parts.empty()) throw std::invalid_argument("merge: no records");
  MergedEstimate out;
  for (const auto& p : parts) out.total_steps += p.steps;
  if (out.total_steps == 0) throw std::invalid_argument("merge: no accumulated steps");
  double var = 0.0;
  for (const auto& p : parts) {
    const double f = double(p.steps) / double(out.total_steps);
    out.value += f * p.mean;
    var += f * f * p.sigma_bar * p.sigma_bar;
  }
  out.sigma_bar = std::sqrt(var);
  return out;
}

namespace {

struct WorkerState {
  int index = 0;
  WalkerEnsemble ensemble;
  BlockingAccumulator acc{100};
  long long done = 0;
};

WorkerSummary summarize(const WorkerState& w) {
  const double re = w.acc.real_sum();
  const double im = w.acc.imag_sum();
  return WorkerSummary{w.index,
                       w.acc.count(),
                       w.acc.mean(),
                       w.acc.sigma_bar(),
                       w.ensemble.acceptance_fraction(),
                       re != 0.0 ? std::abs(im) / std::abs(re) : std::abs(im)};
}

void write_checkpoint(const std::string& path, std::uint64_t hash, const RunConfig& config,
                      const std::vector<WorkerState>& workers) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + tmp);
    out << "mcmp2-checkpoint 1\n";
    out << "confighash " << hash << "\n";
    out << "config-begin\n" << canonical_config_text(config) << "config-end\n";
    out << "workers " << workers.size() << "\n";
    for (const auto& w : workers) {
      out << "worker " << w.index << "\n";
      out << "steps " << w.acc.count() << "\n";
      out << "sums " << format_double(w.acc.real_sum()) << ' '
          << format_double(w.acc.imag_sum()) << "\n";
      out << "partial " << w.acc.in_block() << ' ' << format_double(w.acc.partial()) << "\n";
      out << "blocks " << w.acc.block_means().size() << "\n";
      for (double b : w.acc.block_means()) out << format_double(b) << "\n";
      out << "ensemble\n";
      w.ensemble.save(out);
      out << "end-worker\n";
    }
    if (!out) throw std::runtime_error("failed writing checkpoint: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

struct CheckpointData {
  std::uint64_t hash = 0;
  RunConfig config;
  std::vector<WorkerState> workers;
};

CheckpointData read_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  std::string word;
  in >> word;
  if (word != "mcmp2-checkpoint") throw std::runtime_error("checkpoint: bad header");
  int version = 0;
  in >> version;
  if (version != 1) throw std::runtime_error("checkpoint: unsupported version");
  CheckpointData data;
  in >> word >> data.hash;
  if (word != "confighash") throw std::runtime_error("checkpoint: missing confighash");
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  if (line != "config-begin") throw std::runtime_error("checkpoint: missing config section");
  std::ostringstream cfg;
  while (std::getline(in, line) && line != "config-end") cfg << line << "\n";
  data.config = parse_config_text(cfg.str());

  std::size_t nworkers = 0;
  in >> word >> nworkers;
  if (word != "workers") throw std::runtime_error("checkpoint: missing workers record");
  data.workers.reserve(nworkers);
  for (std::size_t k = 0; k < nworkers; ++k) {
    WorkerState w;
    w.acc = BlockingAccumulator(data.config.block_size);
    in >> word >> w.index;
    if (word != "worker") throw std::runtime_error("checkpoint: missing worker record");
    long long steps = 0;
    double sum = 0, imag = 0, partial = 0;
    long in_block = 0;
    std::size_t nblocks = 0;
    in >> word >> steps;
    if (word != "steps") throw std::runtime_error("checkpoint: missing steps");
    in >> word >> sum >> imag;
    if (word != "sums") throw std::runtime_error("checkpoint: missing sums");
    in >> word >> in_block >> partial;
    if (word != "partial") throw std::runtime_error("checkpoint: missing partial");
    in >> word >> nblocks;
    if (word != "blocks") throw std::runtime_error("checkpoint: missing blocks");
    std::vector<double> means(nblocks);
    for (auto& b : means) in >> b;
    w.acc.restore(steps, sum, imag, in_block, partial, std::move(means));
    w.done = steps;
    in >> word;
    if (word != "ensemble") throw std::runtime_error("checkpoint: missing ensemble");
    w.ensemble = WalkerEnsemble::load(in);
    in >> word;
    if (word != "end-worker") throw std::runtime_error("checkpoint: missing end-worker");
    if (!in) throw std::runtime_error("checkpoint: truncated file");
    data.workers.push_back(std::move(w));
  }
  return data;
}

long long worker_share(long long total, int workers, int index) {
  return total / workers + (index < total % workers ? 1 : 0);
}

void write_worker_trace(const std::string& trace_path, const WorkerState& w) {
  const std::string path = trace_path + ".w" + std::to_string(w.index);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write trace file: " + tmp);
    for (const auto& t : w.acc.trace())
      out << t.n << ' ' << format_double(t.mean) << ' ' << format_double(t.sigma_bar) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

void concatenate_traces(const std::string& trace_path, std::size_t nworkers) {
  std::ofstream out(trace_path);
  if (!out) throw std::runtime_error("cannot write trace file: " + trace_path);
  for (std::size_t k = 0; k < nworkers; ++k) {
    const std::string part = trace_path + ".w" + std::to_string(k);
    std::ifstream in(part);
    if (in) out << in.rdbuf();
  }
  out.close();
  for (std::size_t k = 0; k < nworkers; ++k)
    std::filesystem::remove(trace_path + ".w" + std::to_string(k));
}

class Engine {
public:
  Engine(RunConfig config, std::vector<WorkerState> workers_or_empty)
      : config_(std::move(config)),
        spinors_(load_spinor_set(config_.spinor_path)),
        hash_(config_hash(config_, hash_file_contents(config_.spinor_path))) {
    config_.validate();
    if (!spinors_.molecule())
      throw std::runtime_error("spinor file has no nuclei record; the sampling weight needs it");
    spec_.emplace(*spinors_.molecule(), config_.weight_overrides);
    tau_.emplace(lambda_from_gap(spinors_));

    if (workers_or_empty.empty()) {
      workers_.reserve(config_.workers);
      for (int w = 0; w < config_.workers; ++w) {
        WorkerState ws;
        ws.index = w;
        ws.acc = BlockingAccumulator(config_.block_size);
        ws.ensemble =
            init_ensemble(config_.walkers, *spinors_.molecule(), *spec_, config_.seed,
                          std::uint32_t(w));
        burn_in(ws.ensemble, *spec_, config_.burn_in);
        workers_.push_back(std::move(ws));
      }
    } else {
      workers_ = std::move(workers_or_empty);
      for (auto& w : workers_) {
        if (w.ensemble.m() != config_.walkers)
          throw std::runtime_error("checkpoint: walker count disagrees with config");
        for (const auto& p : w.ensemble.pairs()) {
          const double g1 = spec_->g(p.r1), g2 = spec_->g(p.r2);
          if (std::abs(g1 - p.g1) > 1e-12 * std::abs(g1) ||
              std::abs(g2 - p.g2) > 1e-12 * std::abs(g2))
            throw std::runtime_error(
                "checkpoint: cached walker weights disagree with recomputation");
        }
      }
    }
  }

  RunReport drive(const RunHooks& hooks) {
    long intervals = 0;
    bool on_target = false;
    for (;;) {
      std::vector<long long> chunks(workers_.size(), config_.checkpoint_interval);
      if (config_.steps) {
        for (std::size_t w = 0; w < workers_.size(); ++w) {
          const long long share = worker_share(*config_.steps, config_.workers, int(w));
          chunks[w] = std::min<long long>(config_.checkpoint_interval, share - workers_[w].done);
        }
      }
      advance_parallel(chunks);
      ++intervals;

      if (!config_.checkpoint_path.empty())
        write_checkpoint(config_.checkpoint_path, hash_, config_, workers_);
      if (!config_.trace_path.empty())
        for (const auto& w : workers_) write_worker_trace(config_.trace_path, w);

      if (config_.steps) {
        bool all_done = true;
        for (std::size_t w = 0; w < workers_.size(); ++w)
          if (workers_[w].done < worker_share(*config_.steps, config_.workers, int(w)))
            all_done = false;
        if (all_done) break;
      } else {
        bool ready = true;
        for (const auto& w : workers_)
          if (w.acc.block_means().empty()) ready = false;
        if (ready) {
          const MergedEstimate m = current_merged();
          if (m.sigma_bar > 0 && m.value != 0 &&
              m.sigma_bar / std::abs(m.value) <= *config_.target_rel_err) {
            on_target = true;
            break;
          }
        }
      }
      if (hooks.abort_after_intervals > 0 && intervals >= hooks.abort_after_intervals)
        return make_report(false);  // simulated kill; checkpoint already on disk
    }

    if (!config_.trace_path.empty()) concatenate_traces(config_.trace_path, workers_.size());
    return make_report(on_target);
  }

private:
  void advance_parallel(const std::vector<long long>& chunks) {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers_.size());
    for (std::size_t w = 0; w < workers_.size(); ++w) {
      threads.emplace_back([this, w, &chunks, &errors] {
        try {
          advance(workers_[w], chunks[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  void advance(WorkerState& w, long long nsteps) {
    if (nsteps <= 0) return;
    EstimatorWorkspace ws(spinors_, config_.walkers);
    for (long long s = 0; s < nsteps; ++s) {
      metropolis_step(w.ensemble, *spec_);
      const double tau = tau_->sample(w.ensemble.rng().uniform());
      const StepEstimate est = mc_step_estimate(spinors_, w.ensemble, tau, *spec_, *tau_, ws);
      w.acc.add(est.value, est.imag);
    }
    w.done += nsteps;
  }

  MergedEstimate current_merged() const {
    std::vector<WorkerSummary> parts;
    parts.reserve(workers_.size());
    for (const auto& w : workers_) parts.push_back(summarize(w));
    return merge_estimates(parts);
  }

  RunReport make_report(bool on_target) const {
    RunReport rep;
    for (const auto& w : workers_) rep.workers.push_back(summarize(w));
    rep.merged = merge_estimates(rep.workers);
    rep.stopped_on_target = on_target;
    return rep;
  }

  RunConfig config_;
  SpinorSet spinors_;
  std::uint64_t hash_;
  std::optional<WeightSpec> spec_;
  std::optional<TauSampler> tau_;
  std::vector<WorkerState> workers_;
};

}  // namespace

RunReport run(const RunConfig& config, const RunHooks& hooks) {
  Engine engine(config, {});
  return engine.drive(hooks);
}

RunReport resume(const std::string& checkpoint_path, const RunHooks& hooks) {
  CheckpointData data = read_checkpoint(checkpoint_path);
  const std::uint64_t expect =
      config_hash(data.config, hash_file_contents(data.config.spinor_path));
  if (expect != data.hash)
    throw std::runtime_error(
        "checkpoint: config hash mismatch (spinor file or physics settings changed)");
  Engine engine(data.config, std::move(data.workers));
  return engine.drive(hooks);
}

CheckpointInfo read_checkpoint_info(const std::string& path) {
  CheckpointData data = read_checkpoint(path);
  CheckpointInfo info;
  info.config_hash = data.hash;
  info.config = data.config;
  for (const auto& w : data.workers) info.workers.push_back(summarize(w));
  return info;
}

MergedEstimate merge_checkpoint_files(const std::vector<std::string>& paths,
                                      std::vector<WorkerSummary>* parts_out) {
  if (paths.empty()) throw std::invalid_argument("merge: no checkpoint files");
  std::vector<WorkerSummary> parts;
  std::uint64_t hash = 0;
  bool first = true;
  for (const auto& p : paths) {
    const CheckpointInfo info = read_checkpoint_info(p);
    if (first) {
      hash = info.config_hash;
      first = false;
    } else if (info.config_hash != hash) {
      throw std::runtime_error("merge: config hash mismatch between " + paths.front() + " and " +
                               p);
    }
    for (const auto& w : info.workers) parts.push_back(w);
  }
  if (parts_out) *parts_out = parts;
  return merge_estimates(parts);
}

std::string format_report(const RunReport& report) {
  std::ostringstream os;
  os << "E2        = " << format_double(report.merged.value) << " hartree\n";
  os << "sigma_bar = " << format_double(report.merged.sigma_bar) << " hartree\n";
  os << "steps     = " << report.merged.total_steps << "\n";
  if (report.stopped_on_target) os << "stopped on target relative uncertainty\n";
  for (const auto& w : report.workers) {
    os << "worker " << w.index << ": steps " << w.steps << ", I " << format_double(w.mean)
       << ", sigma_bar " << format_double(w.sigma_bar) << ", acceptance ";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", w.acceptance);
    os << buf << ", imag ratio ";
    std::snprintf(buf, sizeof buf, "%.2e", w.imag_ratio);
    os << buf << "\n";
  }
  return os.str();
}

}  // namespace mcmp2
