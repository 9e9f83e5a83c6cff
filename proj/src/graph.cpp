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

#include "toksim/graph.hpp"

#include <fstream>
#include <sstream>

#include "toksim/errors.hpp"

namespace toksim {

DirectedGraph::DirectedGraph(std::uint32_t n) : n_(n) {
  if (n == 0) throw UsageError("graph needs at least one node");
  adj_.assign(static_cast<std::size_t>(n) * n, false);
}

void DirectedGraph::add_edge(std::uint32_t u, std::uint32_t v) {
  if (u < 1 || u > n_ || v < 1 || v > n_) {
    throw UsageError("edge endpoint out of range");
  }
  if (u == v) throw UsageError("self loops are not allowed");
  const std::size_t idx = static_cast<std::size_t>(u - 1) * n_ + (v - 1);
  if (!adj_[idx]) {
    adj_[idx] = true;
    ++edges_;
  }
}

bool DirectedGraph::has_edge(std::uint32_t u, std::uint32_t v) const {
  if (u < 1 || u > n_ || v < 1 || v > n_) return false;
  return adj_[static_cast<std::size_t>(u - 1) * n_ + (v - 1)];
}

std::vector<std::uint32_t> DirectedGraph::successors(std::uint32_t u) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 1; v <= n_; ++v) {
    if (has_edge(u, v)) out.push_back(v);
  }
  return out;
}

DirectedGraph DirectedGraph::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::uint32_t n = 0;
  bool have_n = false;
  DirectedGraph g(1);
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    if (!have_n) {
      if (!(ls >> n) || n == 0) {
        throw UsageError("graph file: first line must be the node count");
      }
      std::string rest;
      if (ls >> rest) throw UsageError("graph file: bad header line");
      g = DirectedGraph(n);
      have_n = true;
      continue;
    }
    std::uint32_t u = 0, v = 0;
    if (!(ls >> u)) continue;  // blank line
    if (!(ls >> v)) throw UsageError("graph file: bad edge line '" + line +
                                     "'");
    std::string rest;
    if (ls >> rest) throw UsageError("graph file: bad edge line '" + line +
                                     "'");
    g.add_edge(u, v);
  }
  if (!have_n) throw UsageError("graph file is empty");
  return g;
}

DirectedGraph DirectedGraph::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open graph file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

DirectedGraph DirectedGraph::from_edge_mask(std::uint32_t n,
                                            std::uint64_t mask) {
  DirectedGraph g(n);
  std::uint32_t bit = 0;
  for (std::uint32_t u = 1; u <= n; ++u) {
    for (std::uint32_t v = 1; v <= n; ++v) {
      if (u == v) continue;
      if (mask & (std::uint64_t{1} << bit)) g.add_edge(u, v);
      ++bit;
    }
  }
  return g;
}

}  // namespace toksim
