#include "congra/global_queue.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace congra {

namespace {

struct ScoredBlock {
  BlockId id;
  std::int64_t score;
};

bool score_precedes(const ScoredBlock& a, const ScoredBlock& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.id < b.id;
}

// Function-2-style cutoff on the integer score order: estimate the rank-k
// score from a sample, keep everything at least that high, sort what's left.
// The kept set is upward-closed in a total order, so whenever it reaches k
// entries its top k equal the exact top k; the fallback covers the rest.
std::vector<ScoredBlock> sampled_top(const std::vector<ScoredBlock>& candidates, std::size_t k,
                                     const GlobalQueueOptions& options) {
  const std::size_t n = candidates.size();
  std::mt19937_64 rng(options.seed);
  const std::size_t sample_count = std::min<std::size_t>(std::max(options.samples, 1u), n);
  std::vector<std::uint32_t> indices(n);
  for (std::size_t i = 0; i < n; ++i) indices[i] = static_cast<std::uint32_t>(i);
  std::vector<ScoredBlock> sample;
  sample.reserve(sample_count);
  for (std::size_t i = 0; i < sample_count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(indices[i], indices[j]);
    sample.push_back(candidates[indices[i]]);
  }
  std::sort(sample.begin(), sample.end(), score_precedes);
  std::size_t cut = k * sample_count / n;
  cut = std::min(cut, sample_count - 1);
  const ScoredBlock thresh = sample[cut];

  std::vector<ScoredBlock> kept;
  for (const ScoredBlock& c : candidates)
    if (!score_precedes(thresh, c)) kept.push_back(c);
  if (kept.size() < std::min(k, n)) {
    kept = candidates;   // estimate cut too deep; fall back to the full sort
  }
  std::sort(kept.begin(), kept.end(), score_precedes);
  return kept;
}

}  // namespace

std::map<BlockId, std::int64_t> assign_pri(const JobQueue& queue, std::uint32_t q) {
  std::map<BlockId, std::int64_t> pri;
  for (std::size_t rank = 0; rank < queue.entries.size(); ++rank)
    pri[queue.entries[rank]] = static_cast<std::int64_t>(q) - static_cast<std::int64_t>(rank);
  return pri;
}

GlobalQueue build_global_queue(const std::vector<JobQueue>& job_queues, std::uint32_t q,
                               double alpha, const GlobalQueueOptions& options) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("build_global_queue: alpha must be in (0,1]");

  GlobalQueue global;
  for (const JobQueue& queue : job_queues) {
    for (std::size_t rank = 0; rank < queue.entries.size(); ++rank)
      global.scores[queue.entries[rank]] +=
          static_cast<std::int64_t>(q) - static_cast<std::int64_t>(rank);
  }

  std::vector<ScoredBlock> candidates;
  candidates.reserve(global.scores.size());
  for (const auto& [id, score] : global.scores) candidates.push_back({id, score});

  // floor with a nudge: alpha*q sits a hair under an integer for values like
  // 0.3 * 10.
  const auto main_target = static_cast<std::size_t>(alpha * q + 1e-9);

  std::vector<ScoredBlock> ordered;
  if (candidates.size() > 4ull * q) {
    ordered = sampled_top(candidates, main_target, options);
  } else {
    ordered = candidates;
    std::sort(ordered.begin(), ordered.end(), score_precedes);
  }

  const std::size_t main_count = std::min(main_target, ordered.size());
  global.entries.reserve(std::min<std::size_t>(q, candidates.size()));
  for (std::size_t i = 0; i < main_count; ++i) global.entries.push_back(ordered[i].id);
  global.main_count = global.entries.size();

  std::unordered_set<BlockId> present(global.entries.begin(), global.entries.end());
  bool progressed = true;
  while (global.entries.size() < q && progressed) {
    progressed = false;
    for (const JobQueue& queue : job_queues) {
      if (global.entries.size() >= q) break;
      for (BlockId b : queue.entries) {
        if (present.count(b)) continue;
        global.entries.push_back(b);
        present.insert(b);
        progressed = true;
        break;
      }
    }
  }
  return global;
}

}  // namespace congra
