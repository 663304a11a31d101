#include "congra/controller.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

namespace congra {

const char* mode_name(Mode mode) {
  return mode == Mode::kTwoLevel ? "twolevel" : "naive";
}

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

}  // namespace

Controller::Controller(const Graph& graph, BlockTable blocks, SchedulerConfig config)
    : graph_(graph),
      blocks_(std::move(blocks)),
      config_(config),
      pool_(config.workers) {
  if (!(config_.alpha > 0.0 && config_.alpha <= 1.0))
    throw std::invalid_argument("controller: alpha must be in (0,1]");
  if (!(config_.tolerance > 0.0))
    throw std::invalid_argument("controller: tolerance must be > 0");
  if (!(config_.c_const > 0.0))
    throw std::invalid_argument("controller: c must be > 0");
  if (config_.samples == 0) throw std::invalid_argument("controller: samples must be >= 1");
  if (config_.max_supersteps == 0)
    throw std::invalid_argument("controller: max_supersteps must be >= 1");
  if (blocks_.block_count() == 0)
    throw std::invalid_argument("controller: empty block table");
  metrics_.mode = config_.mode;
  queue_capacity_ = queue_length(blocks_.block_count(), graph_.vertex_count, config_.c_const);
}

void Controller::validate(const JobSpec& spec) const {
  if (spec.algo == Algorithm::kPageRank) {
    if (!(spec.damping > 0.0 && spec.damping < 1.0))
      throw std::invalid_argument("admit_job: damping must be in (0,1)");
  } else if (spec.source >= graph_.vertex_count) {
    throw std::invalid_argument("admit_job: sssp source " + std::to_string(spec.source) +
                                " out of range");
  }
}

int Controller::admit_job(const JobSpec& spec) {
  return admit_job_at(spec, metrics_.supersteps);
}

int Controller::admit_job_at(const JobSpec& spec, std::uint64_t superstep) {
  validate(spec);
  const int id = next_job_id_++;
  pending_.push_back({std::max(superstep, metrics_.supersteps), id, spec});
  return id;
}

void Controller::admit_due_jobs() {
  std::stable_sort(pending_.begin(), pending_.end(), [](const Admission& a, const Admission& b) {
    if (a.superstep != b.superstep) return a.superstep < b.superstep;
    return a.job_id < b.job_id;
  });
  std::size_t taken = 0;
  while (taken < pending_.size() && pending_[taken].superstep <= metrics_.supersteps) {
    const Admission& adm = pending_[taken];
    jobs_.push_back(init_job(adm.job_id, adm.spec, graph_, config_.tolerance));
    ++taken;
  }
  pending_.erase(pending_.begin(), pending_.begin() + taken);
}

std::vector<std::size_t> Controller::active_indices() const {
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < jobs_.size(); ++i)
    if (!jobs_[i].done) active.push_back(i);
  return active;
}

const JobState& Controller::job(int job_id) const {
  for (const JobState& j : jobs_)
    if (j.job_id == job_id) return j;
  throw std::out_of_range("controller: unknown job id " + std::to_string(job_id));
}

bool Controller::has_pending_work() const {
  if (!pending_.empty()) return true;
  return std::any_of(jobs_.begin(), jobs_.end(), [](const JobState& j) { return !j.done; });
}

std::uint64_t Controller::superstep_seed(std::uint64_t superstep) const {
  // Shared by all jobs within a superstep so that identical jobs draw
  // identical samples and therefore build identical queues.
  return mix64(config_.seed + 0x9e3779b97f4a7c15ULL * (superstep + 1));
}

std::vector<BlockId> Controller::full_sweep_plan() const {
  std::vector<BlockId> plan(blocks_.block_count());
  std::iota(plan.begin(), plan.end(), 0u);
  return plan;
}

std::vector<BlockId> Controller::two_level_plan(const std::vector<std::size_t>& active) {
  // No priority history yet: treat every block the same and sweep in order.
  if (metrics_.supersteps == 0) return full_sweep_plan();

  std::vector<JobQueue> queues(active.size());
  const std::uint64_t seed = superstep_seed(metrics_.supersteps);
  pool_.run_indexed(active.size(), [&](std::size_t i) {
    JobState& job = jobs_[active[i]];
    const Ptable table = build_ptable(job, blocks_);
    queues[i] = do_select(table, queue_capacity_, config_.samples, seed, config_.epsilon_frac);
  });
  const GlobalQueue global = build_global_queue(queues, queue_capacity_, config_.alpha,
                                                {config_.samples, superstep_seed(metrics_.supersteps)});
  return global.entries;
}

std::vector<BlockId> Controller::naive_plan(JobState& job) {
  if (metrics_.supersteps == 0) return full_sweep_plan();
  const Ptable table = build_ptable(job, blocks_);
  return do_select(table, queue_capacity_, config_.samples,
                   superstep_seed(metrics_.supersteps), config_.epsilon_frac)
      .entries;
}

void Controller::walk_block(std::uint64_t superstep, BlockId block,
                            const std::vector<std::size_t>& active) {
  const VertexRange range = blocks_.range(block);
  std::vector<UpdateSummary> summaries(active.size());
  pool_.run_indexed(active.size(), [&](std::size_t i) {
    summaries[i] = apply_block(jobs_[active[i]], graph_, range);
  });

  std::vector<int> dispatched;
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (summaries[i].vertices_processed == 0) continue;
    const int id = jobs_[active[i]].job_id;
    dispatched.push_back(id);
    metrics_.per_job_vertex_updates[id] += summaries[i].vertices_processed;
    if (on_apply) on_apply(superstep, block, id);
  }
  if (dispatched.empty()) return;   // nobody had work here; nothing was loaded
  ++metrics_.block_loads;
  if (on_block_load) on_block_load(superstep, block, dispatched);
}

void Controller::run_naive_superstep(std::uint64_t superstep,
                                     const std::vector<std::size_t>& active) {
  for (std::size_t i : active) {
    JobState& job = jobs_[i];
    for (BlockId block : naive_plan(job)) {
      const UpdateSummary summary = apply_block(job, graph_, blocks_.range(block));
      if (summary.vertices_processed == 0) continue;
      metrics_.per_job_vertex_updates[job.job_id] += summary.vertices_processed;
      if (on_apply) on_apply(superstep, block, job.job_id);
      ++metrics_.block_loads;
      if (on_block_load) on_block_load(superstep, block, {job.job_id});
    }
  }
}

void Controller::finish_converged_jobs(const std::vector<std::size_t>& active) {
  for (std::size_t i : active) {
    JobState& job = jobs_[i];
    if (!job.done && job_converged(job)) {
      job.done = true;
      if (on_job_done) on_job_done(job);
    }
  }
}

bool Controller::step() {
  admit_due_jobs();
  const std::vector<std::size_t> active = active_indices();
  if (active.empty() && pending_.empty()) return false;

  const std::uint64_t superstep = metrics_.supersteps;
  if (!active.empty()) {
    if (config_.mode == Mode::kTwoLevel) {
      for (BlockId block : two_level_plan(active)) walk_block(superstep, block, active);
    } else {
      run_naive_superstep(superstep, active);
    }
    for (std::size_t i : active) ++metrics_.per_job_iterations[jobs_[i].job_id];
    finish_converged_jobs(active);
  }
  ++metrics_.supersteps;
  return has_pending_work();
}

Metrics Controller::run_to_convergence() {
  if (jobs_.empty() && pending_.empty())
    throw std::invalid_argument("run_to_convergence: no jobs admitted");
  const auto start = std::chrono::steady_clock::now();
  while (has_pending_work()) {
    if (metrics_.supersteps >= config_.max_supersteps) {
      metrics_.wall_time_ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
      throw SuperstepLimitError("superstep limit " + std::to_string(config_.max_supersteps) +
                                    " exceeded with unconverged jobs",
                                metrics_);
    }
    step();
  }
  metrics_.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return metrics_;
}

}  // namespace congra
