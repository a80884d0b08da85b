#include "wsurg/oracle.hpp"

#include "wsurg/errors.hpp"

#include <cstdint>
#include <functional>
#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

namespace wsurg {

Integer kontsevich_nd(int d) {
  if (d < 1) throw ValidationError("kontsevich_nd: degree must be positive");
  std::vector<Integer> N(static_cast<std::size_t>(d) + 1, 0);
  N[1] = 1;
  for (long n = 2; n <= d; ++n) {
    Integer acc = 0;
    for (long a = 1; a < n; ++a) {
      long b = n - a;
      acc += N[a] * N[b] * a * a * b * (b * binom(3 * n - 4, 3 * a - 2) - a * binom(3 * n - 4, 3 * a - 1));
    }
    N[n] = acc;
  }
  return N[d];
}

namespace {

using Edges = std::vector<std::pair<int, int>>;

// Labeled trees on d vertices, via Pruefer sequences.
void for_each_tree(int d, const std::function<void(const Edges&)>& fn) {
  if (d == 1) {
    fn({});
    return;
  }
  if (d == 2) {
    fn({{0, 1}});
    return;
  }
  std::vector<int> seq(static_cast<std::size_t>(d - 2), 0);
  for (;;) {
    std::vector<int> degree(static_cast<std::size_t>(d), 1);
    for (int x : seq) ++degree[x];
    Edges edges;
    for (int x : seq) {
      int leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      edges.emplace_back(leaf, x);
      --degree[leaf];
      --degree[x];
    }
    int u = -1, v = -1;
    for (int i = 0; i < d; ++i)
      if (degree[i] == 1) (u < 0 ? u : v) = i;
    edges.emplace_back(u, v);
    fn(edges);
    std::size_t i = 0;
    while (i < seq.size() && ++seq[i] == d) seq[i++] = 0;
    if (i == seq.size()) break;
  }
}

// Sum of div over the side of edge e containing `start`.
long side_sum(int d, const Edges& edges, std::size_t skip, int start, const std::vector<int>& div) {
  std::vector<char> seen(static_cast<std::size_t>(d), 0);
  std::vector<int> stack{start};
  seen[start] = 1;
  long sum = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    sum += div[v];
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (k == skip) continue;
      auto [a, b] = edges[k];
      int w = a == v ? b : b == v ? a : -1;
      if (w >= 0 && !seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return sum;
}

std::vector<int> encode(const FloorDiagram& g, const std::vector<int>& perm) {
  std::vector<int> code(static_cast<std::size_t>(g.degree));
  for (int v = 0; v < g.degree; ++v) code[perm[v]] = g.divergence[v];
  std::vector<std::pair<int, int>> e;
  for (const auto& x : g.edges) e.emplace_back(perm[x.from], perm[x.to]);
  std::sort(e.begin(), e.end());
  for (auto [a, b] : e) {
    code.push_back(a);
    code.push_back(b);
  }
  return code;
}

// Linear extensions of the marked poset (floors, elevators, sinks), with the
// sinks of one floor treated as indistinguishable.
Integer count_markings(const FloorDiagram& g) {
  // elements: floors 0..d-1, then elevators, then sinks
  const int d = g.degree;
  std::vector<std::vector<int>> below;  // predecessors
  below.resize(static_cast<std::size_t>(d));
  for (const auto& e : g.edges) {
    below.push_back({e.from});
    below[e.to].push_back(static_cast<int>(below.size()) - 1);
  }
  for (int v = 0; v < d; ++v)
    for (int k = 0; k < g.sinks[v]; ++k) below.push_back({v});
  const int n = static_cast<int>(below.size());
  std::vector<std::uint32_t> need(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    for (int p : below[i]) need[i] |= 1u << p;

  std::unordered_map<std::uint32_t, Integer> layer{{0u, Integer(1)}};
  for (int step = 0; step < n; ++step) {
    std::unordered_map<std::uint32_t, Integer> next;
    for (const auto& [mask, ways] : layer)
      for (int i = 0; i < n; ++i)
        if (!(mask & (1u << i)) && (need[i] & mask) == need[i]) next[mask | (1u << i)] += ways;
    layer = std::move(next);
  }
  Integer total = layer.begin()->second;
  for (int v = 0; v < d; ++v)
    for (int k = 2; k <= g.sinks[v]; ++k) total /= k;
  return total;
}

}  // namespace

std::vector<DiagramCount> enumerate_diagrams(int d, int max_degree) {
  if (d < 1 || d > max_degree)
    throw ValidationError("enumerate_diagrams: degree " + std::to_string(d) + " outside [1, " +
                          std::to_string(max_degree) + "]");
  std::map<std::vector<int>, std::pair<FloorDiagram, long>> found;  // canonical code -> (diagram, automorphisms)
  std::vector<int> perm(static_cast<std::size_t>(d));

  for_each_tree(d, [&](const Edges& tree) {
    // nonincreasing divergences <= 1 summing to 0; edge orientation and weight follow
    std::vector<int> div(static_cast<std::size_t>(d), 1);
    auto visit = [&]() {
      FloorDiagram g;
      g.degree = d;
      g.divergence = div;
      for (std::size_t k = 0; k < tree.size(); ++k) {
        auto [a, b] = tree[k];
        long w = side_sum(d, tree, k, a, div);
        if (w == 0) return;
        if (w > 0) g.edges.push_back({a, b, w});
        else g.edges.push_back({b, a, -w});
      }
      for (int v = 0; v < d; ++v) g.sinks.push_back(1 - div[v]);
      std::iota(perm.begin(), perm.end(), 0);
      std::vector<int> self = encode(g, perm), best = self;
      long aut = 0;
      do {
        // labelings keep divergences sorted, so only block permutations matter
        bool keeps = true;
        for (int v = 0; v < d && keeps; ++v) keeps = div[perm[v]] == div[v];
        if (!keeps) continue;
        auto c = encode(g, perm);
        if (c == self) ++aut;
        best = std::min(best, c);
      } while (std::next_permutation(perm.begin(), perm.end()));
      found.emplace(best, std::make_pair(g, aut));
    };
    std::function<void(int, long)> rec = [&](int v, long sum) {
      if (v == d) {
        if (sum == 0) visit();
        return;
      }
      for (int x = v == 0 ? 1 : div[v - 1]; x >= -(d - 1); --x) {
        // the remaining floors can lower the sum by at most (d-1) each
        long rest = d - v - 1;
        if (sum + x > rest * (d - 1) || sum + x + rest < 0) continue;
        div[v] = x;
        rec(v + 1, sum + x);
      }
    };
    rec(0, 0);
  });

  std::vector<DiagramCount> out;
  for (auto& [code, entry] : found) {
    auto& [g, aut] = entry;
    DiagramCount c;
    c.markings = count_markings(g) / aut;
    c.complex_mult = 1;
    bool all_odd = true;
    for (const auto& e : g.edges) {
      c.complex_mult *= Integer(e.weight) * e.weight;
      if (e.weight % 2 == 0) all_odd = false;
    }
    c.real_mult = all_odd ? 1 : 0;
    c.diagram = g;
    out.push_back(std::move(c));
  }
  return out;
}

OracleSummary oracle_summary(int d, int max_degree) {
  OracleSummary s;
  s.degree = d;
  s.complex_total = 0;
  s.real_total = 0;
  auto all = enumerate_diagrams(d, max_degree);
  s.diagram_count = all.size();
  for (const auto& c : all) {
    s.complex_total += c.markings * c.complex_mult;
    s.real_total += c.markings * c.real_mult;
  }
  return s;
}

Integer welschinger_s0(int d, int max_degree) { return oracle_summary(d, max_degree).real_total; }

}  // namespace wsurg
