// Copyright 2026 The toksim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TOKSIM_GRAPH_HPP_
#define TOKSIM_GRAPH_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace toksim {

// Simple directed graph on nodes 1..n, no self loops. Adjacency is a dense
// bool matrix; the graphs here stay tiny (Hamiltonian path instances).
class DirectedGraph {
 public:
  explicit DirectedGraph(std::uint32_t n);

  // File format: first line n, then one "u v" edge per line. 1-based,
  // blank lines ignored.
  static DirectedGraph from_file(const std::string& path);
  static DirectedGraph from_text(const std::string& text);

  // Enumeration helper: bit e of mask switches the e-th ordered pair (u,v),
  // u != v, in row major order. n=4 has 12 pairs, so masks 0..4095 cover
  // every labeled digraph.
  static DirectedGraph from_edge_mask(std::uint32_t n, std::uint64_t mask);
  static std::uint32_t ordered_pair_count(std::uint32_t n) {
    return n * (n - 1);
  }

  void add_edge(std::uint32_t u, std::uint32_t v);
  bool has_edge(std::uint32_t u, std::uint32_t v) const;
  std::uint32_t node_count() const { return n_; }
  std::uint64_t edge_count() const { return edges_; }

  // Successors of u in ascending order.
  std::vector<std::uint32_t> successors(std::uint32_t u) const;

 private:
  std::uint32_t n_;
  std::uint64_t edges_ = 0;
  std::vector<bool> adj_;  // (u-1) * n + (v-1)
};

}  // namespace toksim

#endif  // TOKSIM_GRAPH_HPP_
