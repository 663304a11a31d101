#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "congra/graph.hpp"
#include "congra/priority.hpp"

namespace congra {

/// One superstep's block order. The main section holds the blocks with the
/// highest cumulative rank weight; the reserved tail holds blocks that top
/// some individual job's queue but did not score into the main section.
struct GlobalQueue {
  std::vector<BlockId> entries;             // main section, then reserved section
  std::map<BlockId, std::int64_t> scores;   // cumulative rank weight per block
  std::size_t main_count = 0;
};

// Rank weights for one job queue: the entry at rank r (0-based) gets q - r.
std::map<BlockId, std::int64_t> assign_pri(const JobQueue& queue, std::uint32_t q);

struct GlobalQueueOptions {
  std::uint32_t samples = 500;   // sampled cutoff when candidates exceed 4q
  std::uint64_t seed = 0;
};

// Merge per-job queues: accumulate rank weights, take the floor(alpha*q)
// top-scoring blocks (score descending, block id ascending), then fill the
// remaining slots round-robin — each job in admission order contributes its
// highest-ranked block not yet present, cycling until the queue holds q
// entries or candidates run out.
GlobalQueue build_global_queue(const std::vector<JobQueue>& job_queues, std::uint32_t q,
                               double alpha, const GlobalQueueOptions& options = {});

}  // namespace congra
