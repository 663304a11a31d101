#include "congra/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace congra {

namespace {

bool is_blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '#';
  }
  return true;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

EdgeList load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open edge list");

  EdgeList edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;

    const char* p = line.data();
    const char* end = p + line.size();
    std::string_view tokens[4];
    int count = 0;
    while (p < end) {
      while (p < end && std::isspace(static_cast<unsigned char>(*p))) ++p;
      if (p >= end) break;
      const char* start = p;
      while (p < end && !std::isspace(static_cast<unsigned char>(*p))) ++p;
      if (count == 4) parse_fail(path, line_no, "expected 2 or 3 fields");
      tokens[count++] = std::string_view(start, static_cast<std::size_t>(p - start));
    }
    if (count < 2 || count > 3) parse_fail(path, line_no, "expected 2 or 3 fields");

    Edge e;
    auto parse_vertex = [&](std::string_view tok, const char* what) {
      std::uint64_t raw = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), raw);
      if (ec != std::errc() || ptr != tok.data() + tok.size())
        parse_fail(path, line_no, std::string("bad ") + what + " '" + std::string(tok) + "'");
      if (raw > 0xffffffffULL) parse_fail(path, line_no, std::string(what) + " id too large");
      return static_cast<VertexId>(raw);
    };
    e.src = parse_vertex(tokens[0], "source vertex");
    e.dst = parse_vertex(tokens[1], "target vertex");
    if (count == 3) {
      auto tok = tokens[2];
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), e.weight);
      if (ec != std::errc() || ptr != tok.data() + tok.size())
        parse_fail(path, line_no, "bad weight '" + std::string(tok) + "'");
      if (!std::isfinite(e.weight) || e.weight < 0.0)
        parse_fail(path, line_no, "weight must be finite and non-negative");
    }
    edges.push_back(e);
  }
  if (in.bad()) throw std::runtime_error(path + ": read error");
  return edges;
}

Graph build_graph(const EdgeList& edges) {
  if (edges.empty()) throw std::invalid_argument("build_graph: empty edge list");

  VertexId max_id = 0;
  for (const Edge& e : edges) max_id = std::max({max_id, e.src, e.dst});

  Graph g;
  g.vertex_count = max_id + 1;
  g.out_offsets.assign(static_cast<std::size_t>(g.vertex_count) + 1, 0);
  for (const Edge& e : edges) ++g.out_offsets[e.src + 1];
  for (std::size_t v = 0; v < g.vertex_count; ++v) g.out_offsets[v + 1] += g.out_offsets[v];

  g.out_targets.resize(edges.size());
  g.out_weights.resize(edges.size());
  std::vector<EdgeId> cursor(g.out_offsets.begin(), g.out_offsets.end() - 1);
  for (const Edge& e : edges) {
    const EdgeId slot = cursor[e.src]++;
    g.out_targets[slot] = e.dst;
    g.out_weights[slot] = e.weight;
  }
  return g;
}

BlockTable partition_blocks(const Graph& graph, VertexId block_size) {
  if (block_size == 0) throw std::invalid_argument("partition_blocks: block_size must be >= 1");

  BlockTable table;
  table.vertex_count = graph.vertex_count;
  table.block_size = block_size;
  for (std::uint64_t start = 0; start < graph.vertex_count; start += block_size) {
    const std::uint64_t end = std::min<std::uint64_t>(start + block_size, graph.vertex_count);
    table.ranges.push_back({static_cast<VertexId>(start), static_cast<VertexId>(end)});
  }
  return table;
}

BlockId BlockTable::block_of(VertexId v) const {
  if (v >= vertex_count)
    throw std::out_of_range("block_of: vertex " + std::to_string(v) + " out of range");
  return static_cast<BlockId>(v / block_size);
}

}  // namespace congra
