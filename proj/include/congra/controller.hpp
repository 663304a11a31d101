#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "congra/global_queue.hpp"
#include "congra/graph.hpp"
#include "congra/job.hpp"
#include "congra/priority.hpp"
#include "congra/worker_pool.hpp"

namespace congra {

enum class Mode { kTwoLevel, kNaivePerJob };

const char* mode_name(Mode mode);

struct Metrics {
  Mode mode = Mode::kTwoLevel;
  std::uint64_t supersteps = 0;
  // Two-level: one per block activation shared by every dispatched job.
  // Naive: one per (job, block) activation.
  std::uint64_t block_loads = 0;
  std::map<int, std::uint64_t> per_job_iterations;
  std::map<int, std::uint64_t> per_job_vertex_updates;
  double wall_time_ms = 0.0;
};

struct SchedulerConfig {
  Mode mode = Mode::kTwoLevel;
  double c_const = 100.0;
  double alpha = 0.8;
  std::uint32_t samples = 500;
  double epsilon_frac = kDefaultEpsilonFrac;
  double tolerance = 1e-9;
  std::uint64_t seed = 42;
  std::uint64_t max_supersteps = 10000;
  unsigned workers = 1;
};

class SuperstepLimitError : public std::runtime_error {
 public:
  SuperstepLimitError(const std::string& what, Metrics partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Metrics& partial_metrics() const { return partial_; }

 private:
  Metrics partial_;
};

/// Superstep loop over a shared immutable graph.
///
/// Two-level mode: every unconverged job scores all blocks, selects its own
/// queue, the queues merge into one global queue, and each selected block is
/// processed by every job with pending work on it back to back before the
/// walk moves on. Naive mode runs each job's prioritized walk separately and
/// serves as the redundant-load baseline. The first superstep treats all
/// priorities as equal, so it sweeps every block in id order.
class Controller {
 public:
  // The graph must outlive the controller; the block table is owned.
  Controller(const Graph& graph, BlockTable blocks, SchedulerConfig config);
  Controller(Graph&&, BlockTable, SchedulerConfig) = delete;

  // New jobs join at the next superstep boundary; specs are validated here.
  int admit_job(const JobSpec& spec);
  int admit_job_at(const JobSpec& spec, std::uint64_t superstep);

  // Runs one superstep. Returns false once nothing is left to do.
  bool step();

  // Steps until every job converged; throws SuperstepLimitError (carrying
  // the metrics so far) if the superstep cap is hit first.
  Metrics run_to_convergence();

  std::uint32_t queue_capacity() const { return queue_capacity_; }
  const Metrics& metrics() const { return metrics_; }
  std::size_t job_count() const { return jobs_.size(); }
  const JobState& job(int job_id) const;
  bool has_pending_work() const;

  // Instrumentation, invoked on the stepping thread in dispatch order.
  std::function<void(std::uint64_t superstep, BlockId block, int job_id)> on_apply;
  std::function<void(std::uint64_t superstep, BlockId block, const std::vector<int>& job_ids)>
      on_block_load;
  std::function<void(const JobState& job)> on_job_done;

 private:
  struct Admission {
    std::uint64_t superstep;
    int job_id;
    JobSpec spec;
  };

  void validate(const JobSpec& spec) const;
  void admit_due_jobs();
  std::vector<std::size_t> active_indices() const;
  std::vector<BlockId> full_sweep_plan() const;
  std::vector<BlockId> two_level_plan(const std::vector<std::size_t>& active);
  std::vector<BlockId> naive_plan(JobState& job);
  void walk_block(std::uint64_t superstep, BlockId block, const std::vector<std::size_t>& active);
  void run_naive_superstep(std::uint64_t superstep, const std::vector<std::size_t>& active);
  std::uint64_t superstep_seed(std::uint64_t superstep) const;
  void finish_converged_jobs(const std::vector<std::size_t>& active);

  const Graph& graph_;
  BlockTable blocks_;
  SchedulerConfig config_;
  std::uint32_t queue_capacity_ = 0;
  std::vector<JobState> jobs_;
  std::vector<Admission> pending_;
  int next_job_id_ = 0;
  Metrics metrics_;
  WorkerPool pool_;
};

}  // namespace congra
