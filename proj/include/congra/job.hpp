#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "congra/graph.hpp"

namespace congra {

enum class Algorithm { kPageRank, kSssp };

struct JobSpec {
  Algorithm algo = Algorithm::kPageRank;
  double damping = 0.85;   // pagerank only
  VertexId source = 0;     // sssp only
};

struct UpdateSummary {
  std::uint64_t vertices_processed = 0;
  std::uint64_t deltas_emitted = 0;
};

/// Per-job vertex state. For pagerank `value` is the accumulated rank and
/// `delta` the pending change; for sssp `value` is the best distance so far
/// and pending work lives in the active flags alone.
///
/// A JobState is owned by one worker at a time. Jobs never write shared
/// state, so any set of jobs may process the same block concurrently.
struct JobState {
  int job_id = -1;
  JobSpec spec;
  double tolerance = 1e-9;
  std::vector<double> value;
  std::vector<double> delta;
  std::vector<std::uint8_t> active;   // 1 = pending work (unconverged)
  std::uint64_t active_count = 0;
  bool done = false;

  // Bound turning sssp distances into positive priority magnitudes
  // (base - distance, so nearer vertices rank higher). Refreshed once per
  // scheduling round by refresh_priority_base().
  double sssp_priority_base = 0.0;

  VertexId vertex_count() const { return static_cast<VertexId>(value.size()); }
  bool vertex_active(VertexId v) const { return active[v] != 0; }
  bool vertex_converged(VertexId v) const { return active[v] == 0; }

  void set_active(VertexId v) {
    if (!active[v]) {
      active[v] = 1;
      ++active_count;
    }
  }
  void clear_active(VertexId v) {
    if (active[v]) {
      active[v] = 0;
      --active_count;
    }
  }

  void refresh_priority_base();

  // Non-negative magnitude fed into block priorities; 0 for converged
  // vertices. For sssp callers must refresh_priority_base() first.
  double priority_weight(VertexId v) const;
};

JobState init_job(int job_id, const JobSpec& spec, const Graph& graph, double tolerance);

// Processes every vertex of `range` that has pending work when the sweep
// reaches it. Vertices outside the range only ever receive deltas; they are
// never used as sources here.
UpdateSummary apply_block(JobState& job, const Graph& graph, VertexRange range);

// Signed per-vertex priority: the pending rank change for pagerank, the
// negated distance for sssp, 0 once converged.
double node_priority(const JobState& job, VertexId v);

bool job_converged(const JobState& job);

// One `vertex<TAB>value` line per vertex; requires job.done.
void write_results(const JobState& job, const std::string& path);

}  // namespace congra
