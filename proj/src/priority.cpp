#include "congra/priority.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>

namespace congra {

bool cbp(PriorityPair a, PriorityPair b, double epsilon_frac) {
  bool state = true;
  if (a.p_avg < b.p_avg) {
    std::swap(a, b);
    state = !state;
  }
  if (a.node_un < b.node_un) {
    if (a.p_avg - b.p_avg < epsilon_frac * a.p_avg &&
        a.p_avg * a.node_un < b.p_avg * b.node_un) {
      state = !state;
    }
  }
  return state;
}

bool priority_precedes(const PriorityPair& a, const PriorityPair& b, double epsilon_frac) {
  const bool ab = cbp(a, b, epsilon_frac);
  const bool ba = cbp(b, a, epsilon_frac);
  if (ab != ba) return ab;
  return a.block_id < b.block_id;
}

void sort_pairs_descending(std::vector<PriorityPair>& pairs, double epsilon_frac) {
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    PriorityPair key = pairs[i];
    std::size_t j = i;
    while (j > 0 && priority_precedes(key, pairs[j - 1], epsilon_frac)) {
      pairs[j] = pairs[j - 1];
      --j;
    }
    pairs[j] = key;
  }
}

PriorityPair compute_pair(const JobState& job, VertexRange range, BlockId block_id) {
  PriorityPair pair;
  pair.block_id = block_id;
  double sum = 0.0;
  for (VertexId v = range.begin; v < range.end; ++v) {
    if (!job.vertex_active(v)) continue;
    ++pair.node_un;
    sum += job.priority_weight(v);
  }
  pair.p_avg = pair.node_un > 0 ? sum / pair.node_un : 0.0;
  return pair;
}

Ptable build_ptable(JobState& job, const BlockTable& blocks) {
  job.refresh_priority_base();
  Ptable table;
  table.reserve(blocks.block_count());
  for (BlockId b = 0; b < blocks.block_count(); ++b)
    table.push_back(compute_pair(job, blocks.range(b), b));
  return table;
}

std::uint32_t queue_length(std::uint32_t block_count, std::uint64_t vertex_count, double c_const) {
  if (block_count == 0 || vertex_count == 0 || !(c_const > 0.0))
    throw std::invalid_argument("queue_length: block_count, vertex_count and c must be positive");
  const double raw = c_const * block_count / std::sqrt(static_cast<double>(vertex_count));
  const auto rounded = static_cast<std::int64_t>(std::llround(raw));
  return static_cast<std::uint32_t>(
      std::clamp<std::int64_t>(rounded, 1, static_cast<std::int64_t>(block_count)));
}

SelectResult do_select_detailed(const Ptable& ptable, std::uint32_t q, std::uint32_t samples,
                                std::uint64_t seed, double epsilon_frac) {
  if (q == 0 || samples == 0)
    throw std::invalid_argument("do_select: q and samples must be >= 1");

  SelectResult result;
  const std::size_t block_count = ptable.size();
  if (block_count == 0) return result;

  // Sample without replacement via partial Fisher-Yates. Plain modulo keeps
  // the draw reproducible across standard library implementations.
  std::mt19937_64 rng(seed);
  const std::size_t sample_count = std::min<std::size_t>(samples, block_count);
  std::vector<std::uint32_t> indices(block_count);
  std::iota(indices.begin(), indices.end(), 0u);
  std::vector<PriorityPair> sample;
  sample.reserve(sample_count);
  for (std::size_t i = 0; i < sample_count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (block_count - i));
    std::swap(indices[i], indices[j]);
    sample.push_back(ptable[indices[i]]);
    ++result.stats.sample_visits;
  }
  sort_pairs_descending(sample, epsilon_frac);
  result.stats.largest_sort = sample.size();

  std::size_t cut = static_cast<std::size_t>(
      static_cast<std::uint64_t>(q) * samples / block_count);
  cut = std::min(cut, sample_count - 1);
  result.threshold = sample[cut];

  std::vector<PriorityPair> collected;
  for (const PriorityPair& r : ptable) {
    ++result.stats.table_visits;
    if (r.node_un == 0) continue;
    if (cbp(r, result.threshold, epsilon_frac)) collected.push_back(r);
  }
  sort_pairs_descending(collected, epsilon_frac);
  result.stats.largest_sort = std::max(result.stats.largest_sort, collected.size());

  result.collected.reserve(collected.size());
  for (const PriorityPair& r : collected) result.collected.push_back(r.block_id);
  const std::size_t take = std::min<std::size_t>(q, collected.size());
  result.queue.entries.assign(result.collected.begin(), result.collected.begin() + take);
  return result;
}

JobQueue do_select(const Ptable& ptable, std::uint32_t q, std::uint32_t samples,
                   std::uint64_t seed, double epsilon_frac) {
  return do_select_detailed(ptable, q, samples, seed, epsilon_frac).queue;
}

}  // namespace congra
