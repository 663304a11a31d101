#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace congra {

using VertexId = std::uint32_t;
using EdgeId = std::uint64_t;
using BlockId = std::uint32_t;

struct Edge {
  VertexId src = 0;
  VertexId dst = 0;
  double weight = 1.0;
};

using EdgeList = std::vector<Edge>;

/// Immutable out-edge CSR shared by every job. Vertex ids are dense;
/// vertex_count is 1 + the largest id seen in the input, so id gaps show up
/// as isolated vertices. Safe to read from any number of threads once built.
struct Graph {
  VertexId vertex_count = 0;
  std::vector<EdgeId> out_offsets;    // vertex_count + 1 entries, non-decreasing
  std::vector<VertexId> out_targets;
  std::vector<double> out_weights;    // aligned with out_targets

  EdgeId edge_count() const { return static_cast<EdgeId>(out_targets.size()); }

  std::uint32_t out_degree(VertexId v) const {
    return static_cast<std::uint32_t>(out_offsets[v + 1] - out_offsets[v]);
  }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {out_targets.data() + out_offsets[v], out_targets.data() + out_offsets[v + 1]};
  }
};

struct VertexRange {
  VertexId begin = 0;
  VertexId end = 0;   // half-open

  VertexId size() const { return end - begin; }
  bool contains(VertexId v) const { return v >= begin && v < end; }
};

/// Contiguous fixed-size vertex blocks, the scheduling granule. Every block
/// spans block_size vertices except possibly the last.
struct BlockTable {
  VertexId vertex_count = 0;
  VertexId block_size = 0;
  std::vector<VertexRange> ranges;

  BlockId block_count() const { return static_cast<BlockId>(ranges.size()); }
  const VertexRange& range(BlockId b) const { return ranges[b]; }

  // floor(v / block_size); throws if v is out of range.
  BlockId block_of(VertexId v) const;
};

// Text edge list: one `src dst [weight]` per line, blank lines and lines
// starting with '#' skipped. Missing weights default to 1.0.
EdgeList load_edge_list(const std::string& path);

Graph build_graph(const EdgeList& edges);

BlockTable partition_blocks(const Graph& graph, VertexId block_size);

}  // namespace congra
