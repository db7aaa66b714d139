#include "parlab/funcdist/aer.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>

#include "parlab/common/error.hpp"
#include "parlab/common/rng.hpp"

namespace parlab {

void normalize(UndirectedGraph& g) {
  for (auto& [u, v] : g.edges) {
    if (u < 0 || v < 0 || u >= g.n || v >= g.n) throw InvalidGraph("edge endpoint out of range");
    if (u == v) throw InvalidGraph("self-loops are not allowed");
    if (u > v) std::swap(u, v);
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
}

namespace {

using Adjacency = std::vector<std::vector<int>>;

Adjacency adjacency(const UndirectedGraph& g) {
  Adjacency adj(g.n);
  for (auto [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

void erase_neighbor(std::vector<int>& list, int w) {
  list.erase(std::find(list.begin(), list.end(), w));
}

struct PathSearch {
  std::vector<int> dist;
  std::vector<double> count;  // number of shortest paths from the root
};

// BFS from u that ignores the edge (u, v) and stops past depth max_depth.
PathSearch bfs_without_edge(const Adjacency& adj, int u, int v, int max_depth) {
  PathSearch ps{std::vector<int>(adj.size(), -1), std::vector<double>(adj.size(), 0.0)};
  ps.dist[u] = 0;
  ps.count[u] = 1.0;
  std::queue<int> q;
  q.push(u);
  while (!q.empty()) {
    const int a = q.front();
    q.pop();
    if (ps.dist[a] >= max_depth) continue;
    for (int b : adj[a]) {
      if ((a == u && b == v) || (a == v && b == u)) continue;
      if (ps.dist[b] < 0) {
        ps.dist[b] = ps.dist[a] + 1;
        q.push(b);
      }
      if (ps.dist[b] == ps.dist[a] + 1) ps.count[b] += ps.count[a];
    }
  }
  return ps;
}

}  // namespace

UndirectedGraph aer_sample(int n, double m, int r, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("AER needs n >= 1");
  if (!(m >= 0.0)) throw InvalidArgument("AER needs m >= 0");
  if (r < 3) throw InvalidArgument("AER needs r >= 3");
  Rng rng(seed);
  const double p = std::min(1.0, m / n);
  UndirectedGraph g{n, {}};
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.uniform() < p) g.edges.emplace_back(u, v);
    }
  }
  if (r == 3) return g;  // simple graphs already have girth >= 3

  Adjacency adj = adjacency(g);
  // A cycle through (u, v) shorter than r exists iff dist(u, v) <= r - 2 in
  // the graph without that edge. Deletions never create cycles, so the
  // candidate list only needs lazy pruning.
  std::vector<std::pair<int, int>> candidates = g.edges;
  while (!candidates.empty()) {
    const auto pick = rng.below(candidates.size());
    const auto [u, v] = candidates[pick];
    const auto ps = bfs_without_edge(adj, u, v, r - 2);
    if (ps.dist[v] < 0) {
      candidates[pick] = candidates.back();
      candidates.pop_back();
      continue;
    }
    // Uniform shortest u-v path, walked back from v.
    std::vector<std::pair<int, int>> cycle{{u, v}};
    int w = v;
    while (w != u) {
      const double target = rng.uniform() * ps.count[w];
      double acc = 0.0;
      int prev = -1;
      for (int a : adj[w]) {
        if ((a == u && w == v) || (a == v && w == u)) continue;
        if (ps.dist[a] >= 0 && ps.dist[a] == ps.dist[w] - 1) {
          prev = a;
          acc += ps.count[a];
          if (target < acc) break;
        }
      }
      cycle.emplace_back(std::min(prev, w), std::max(prev, w));
      w = prev;
    }
    const auto [a, b] = cycle[rng.below(cycle.size())];
    erase_neighbor(adj[a], b);
    erase_neighbor(adj[b], a);
    const auto it = std::find(candidates.begin(), candidates.end(), std::make_pair(a, b));
    if (it != candidates.end()) {
      *it = candidates.back();
      candidates.pop_back();
    }
  }
  UndirectedGraph out{n, {}};
  for (int a = 0; a < n; ++a) {
    for (int b : adj[a]) {
      if (a < b) out.edges.emplace_back(a, b);
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

std::optional<int> girth(const UndirectedGraph& g) {
  const Adjacency adj = adjacency(g);
  int best = std::numeric_limits<int>::max();
  for (int root = 0; root < g.n; ++root) {
    std::vector<int> dist(g.n, -1), parent(g.n, -1);
    std::queue<int> q;
    dist[root] = 0;
    q.push(root);
    while (!q.empty()) {
      const int a = q.front();
      q.pop();
      if (2 * dist[a] + 1 >= best) break;
      for (int b : adj[a]) {
        if (dist[b] < 0) {
          dist[b] = dist[a] + 1;
          parent[b] = a;
          q.push(b);
        } else if (parent[a] != b) {
          best = std::min(best, dist[a] + dist[b] + 1);
        }
      }
    }
  }
  if (best == std::numeric_limits<int>::max()) return std::nullopt;
  return best;
}

bool connectivity_label(const UndirectedGraph& g) {
  if (g.n == 0) return false;
  const Adjacency adj = adjacency(g);
  std::vector<char> seen(g.n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int a = stack.back();
    stack.pop_back();
    for (int b : adj[a]) {
      if (!seen[b]) {
        seen[b] = 1;
        ++reached;
        stack.push_back(b);
      }
    }
  }
  return reached == g.n;
}

UndirectedGraph disjoint_union(const UndirectedGraph& a, const UndirectedGraph& b) {
  UndirectedGraph out{a.n + b.n, a.edges};
  for (auto [u, v] : b.edges) out.edges.emplace_back(u + a.n, v + a.n);
  normalize(out);
  return out;
}

std::string edge_list_text(const UndirectedGraph& g) {
  std::string out = "n " + std::to_string(g.n) + "\n";
  for (auto [u, v] : g.edges) out += std::to_string(u) + " " + std::to_string(v) + "\n";
  return out;
}

UndirectedGraph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  UndirectedGraph g;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!have_header) {
      std::string tag;
      if (!(ls >> tag >> g.n) || tag != "n" || g.n < 0) {
        throw SchemaError("edge list must start with 'n <count>'");
      }
      have_header = true;
      continue;
    }
    int u = 0, v = 0;
    if (!(ls >> u >> v)) throw SchemaError("bad edge line: " + line);
    g.edges.emplace_back(u, v);
  }
  if (!have_header) throw SchemaError("edge list is missing its header");
  normalize(g);
  return g;
}

}  // namespace parlab
