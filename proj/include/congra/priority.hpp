#pragma once

#include <cstdint>
#include <vector>

#include "congra/graph.hpp"
#include "congra/job.hpp"

namespace congra {

/// Block priority record: how many vertices in the block still have pending
/// work, and the mean priority magnitude over those vertices.
struct PriorityPair {
  BlockId block_id = 0;
  std::uint32_t node_un = 0;
  double p_avg = 0.0;
};

using Ptable = std::vector<PriorityPair>;   // one pair per block, indexed by block id

struct JobQueue {
  std::vector<BlockId> entries;   // priority-descending, no duplicates
};

inline constexpr double kDefaultEpsilonFrac = 0.2;

// Dual-factor comparison: is a's priority at least b's? The mean decides,
// except when the means differ by less than epsilon_frac of the larger one
// and the totals (node_un * p_avg) disagree with it; then the total decides.
// Non-strict: identical pairs compare true.
bool cbp(PriorityPair a, PriorityPair b, double epsilon_frac = kDefaultEpsilonFrac);

// Deterministic strict order for sorting: cbp, with ascending block id
// breaking cbp ties (cbp is not antisymmetric on equal pairs).
bool priority_precedes(const PriorityPair& a, const PriorityPair& b,
                       double epsilon_frac = kDefaultEpsilonFrac);

// Insertion sort into descending priority order. cbp is not a strict weak
// ordering (the epsilon rule admits cycles), which rules out std::sort.
// Everything sorted here is sample- or queue-sized.
void sort_pairs_descending(std::vector<PriorityPair>& pairs,
                           double epsilon_frac = kDefaultEpsilonFrac);

PriorityPair compute_pair(const JobState& job, VertexRange range, BlockId block_id);

// Pair table over all blocks; refreshes the job's priority base first.
Ptable build_ptable(JobState& job, const BlockTable& blocks);

// clamp(round(c * block_count / sqrt(vertex_count)), 1, block_count)
std::uint32_t queue_length(std::uint32_t block_count, std::uint64_t vertex_count, double c_const);

struct SelectStats {
  std::uint64_t table_visits = 0;    // pairs read by the filter pass
  std::uint64_t sample_visits = 0;   // pairs read while sampling
  std::size_t largest_sort = 0;
};

struct SelectResult {
  JobQueue queue;
  PriorityPair threshold;
  std::vector<BlockId> collected;    // filter output before truncation, sorted
  SelectStats stats;
};

// Approximate top-q selection: sample `samples` pairs without replacement,
// estimate the rank-q cutoff from the sorted sample, filter the whole table
// against it in one pass, then sort and truncate what passed. Blocks with
// node_un == 0 never enter the queue.
SelectResult do_select_detailed(const Ptable& ptable, std::uint32_t q, std::uint32_t samples,
                                std::uint64_t seed, double epsilon_frac = kDefaultEpsilonFrac);

JobQueue do_select(const Ptable& ptable, std::uint32_t q, std::uint32_t samples,
                   std::uint64_t seed, double epsilon_frac = kDefaultEpsilonFrac);

}  // namespace congra
