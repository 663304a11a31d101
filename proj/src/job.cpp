#include "congra/job.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace congra {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

JobState init_job(int job_id, const JobSpec& spec, const Graph& graph, double tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("init_job: tolerance must be > 0");
  if (spec.algo == Algorithm::kPageRank) {
    if (!(spec.damping > 0.0 && spec.damping < 1.0))
      throw std::invalid_argument("init_job: damping must be in (0,1)");
  } else if (spec.source >= graph.vertex_count) {
    throw std::invalid_argument("init_job: sssp source " + std::to_string(spec.source) +
                                " out of range (vertex count " +
                                std::to_string(graph.vertex_count) + ")");
  }

  JobState job;
  job.job_id = job_id;
  job.spec = spec;
  job.tolerance = tolerance;
  const std::size_t n = graph.vertex_count;
  if (spec.algo == Algorithm::kPageRank) {
    job.value.assign(n, 0.0);
    job.delta.assign(n, 1.0 - spec.damping);
    job.active.assign(n, 1);
    job.active_count = n;
  } else {
    job.value.assign(n, kInf);
    job.active.assign(n, 0);
    job.value[spec.source] = 0.0;
    job.set_active(spec.source);
  }
  return job;
}

UpdateSummary apply_block(JobState& job, const Graph& graph, VertexRange range) {
  UpdateSummary summary;
  if (job.spec.algo == Algorithm::kPageRank) {
    const double d = job.spec.damping;
    // Forward sweep: a delta landing ahead of the cursor is consumed in the
    // same pass, one landing behind waits for the block's next activation.
    for (VertexId v = range.begin; v < range.end; ++v) {
      if (!job.active[v]) continue;
      const double dv = job.delta[v];
      job.value[v] += dv;
      job.delta[v] = 0.0;
      job.clear_active(v);
      ++summary.vertices_processed;
      const std::uint32_t deg = graph.out_degree(v);
      if (deg == 0) continue;   // dangling: mass is absorbed, not redistributed
      const double share = d * dv / deg;
      for (EdgeId e = graph.out_offsets[v]; e < graph.out_offsets[v + 1]; ++e) {
        const VertexId u = graph.out_targets[e];
        job.delta[u] += share;
        ++summary.deltas_emitted;
        if (!job.active[u] && job.delta[u] >= job.tolerance) job.set_active(u);
      }
    }
  } else {
    for (VertexId v = range.begin; v < range.end; ++v) {
      if (!job.active[v]) continue;
      job.clear_active(v);
      const double dist = job.value[v];
      if (!std::isfinite(dist)) continue;
      ++summary.vertices_processed;
      for (EdgeId e = graph.out_offsets[v]; e < graph.out_offsets[v + 1]; ++e) {
        const VertexId u = graph.out_targets[e];
        const double cand = dist + graph.out_weights[e];
        if (cand < job.value[u]) {
          job.value[u] = cand;
          job.set_active(u);
          ++summary.deltas_emitted;
        }
      }
    }
  }
  return summary;
}

void JobState::refresh_priority_base() {
  if (spec.algo != Algorithm::kSssp) return;
  double max_finite = 0.0;
  for (double v : value)
    if (std::isfinite(v) && v > max_finite) max_finite = v;
  sssp_priority_base = max_finite + 1.0;
}

double JobState::priority_weight(VertexId v) const {
  if (!active[v]) return 0.0;
  if (spec.algo == Algorithm::kPageRank) return delta[v];
  return std::isfinite(value[v]) ? sssp_priority_base - value[v] : 0.0;
}

double node_priority(const JobState& job, VertexId v) {
  if (!job.active[v]) return 0.0;
  if (job.spec.algo == Algorithm::kPageRank) return job.delta[v];
  return std::isfinite(job.value[v]) ? -job.value[v] : 0.0;
}

bool job_converged(const JobState& job) { return job.active_count == 0; }

void write_results(const JobState& job, const std::string& path) {
  if (!job.done) throw std::logic_error("write_results: job " + std::to_string(job.job_id) +
                                        " has not converged");
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  char buf[64];
  for (VertexId v = 0; v < job.vertex_count(); ++v) {
    const auto res = std::to_chars(buf, buf + sizeof(buf), job.value[v]);
    out << v << '\t';
    out.write(buf, res.ptr - buf);
    out << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace congra
