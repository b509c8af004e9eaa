#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "kfib/homomorphism.hpp"
#include "kfib/word.hpp"

namespace kfib {

/// Folded core graph of a finitely generated subgroup of a free group.
/// Vertices are relabeled by BFS from the base vertex (out-edge, then
/// in-edge, per label in order), so equal subgroups produce equal graphs
/// regardless of the generating set's order.
class SubgroupGraph {
 public:
  static constexpr long none = -1;

  /// Stallings construction: wedge the generator loops at a base vertex,
  /// fold until deterministic, prune hanging trees (keeping the base).
  static SubgroupGraph fold(const std::vector<Word>& generators,
                            std::size_t ambient_rank) {
    // flower: one loop per nonempty generator word
    std::size_t next = 1;
    struct E {
      std::size_t from, to;
      std::size_t label;
    };
    std::vector<E> edges;
    for (const Word& raw : generators) {
      Word w = free_reduce(raw);
      std::size_t cur = 0;
      for (std::size_t k = 0; k < w.size(); ++k) {
        std::size_t nxt = (k + 1 == w.size()) ? 0 : next++;
        Letter l = w[k];
        if (generator_index(l) >= ambient_rank)
          throw std::invalid_argument("fold: letter outside ambient rank");
        if (l > 0)
          edges.push_back({cur, nxt, generator_index(l)});
        else
          edges.push_back({nxt, cur, generator_index(l)});
        cur = nxt;
      }
    }

    // fold with union-find until no vertex has two equal-label edges
    std::vector<std::size_t> parent(next);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find =
        [&](std::size_t x) -> std::size_t {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    auto unite = [&](std::size_t a, std::size_t b) {
      a = find(a);
      b = find(b);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);  // keep base low
    };

    bool changed = true;
    while (changed) {
      changed = false;
      std::map<std::pair<std::size_t, std::size_t>, std::size_t> out, in;
      for (const E& e : edges) {
        std::size_t f = find(e.from), t = find(e.to);
        auto ko = std::make_pair(f, e.label);
        auto it = out.find(ko);
        if (it == out.end())
          out[ko] = t;
        else if (it->second != t) {
          unite(it->second, t);
          changed = true;
        }
        auto ki = std::make_pair(t, e.label);
        auto jt = in.find(ki);
        if (jt == in.end())
          in[ki] = f;
        else if (jt->second != f) {
          unite(jt->second, f);
          changed = true;
        }
      }
    }

    // collapse to distinct folded edges
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> folded;
    for (const E& e : edges)
      folded.insert({find(e.from), find(e.to), e.label});

    // core pruning: drop non-base vertices of degree <= 1
    std::map<std::size_t, long> degree;
    degree[find(0)] = 0;
    for (const auto& [f, t, l] : folded) {
      degree[f]++;
      degree[t]++;
    }
    bool pruned = true;
    while (pruned) {
      pruned = false;
      for (auto it = degree.begin(); it != degree.end();) {
        if (it->first != find(0) && it->second <= 1) {
          std::size_t dead = it->first;
          for (auto e = folded.begin(); e != folded.end();) {
            if (std::get<0>(*e) == dead || std::get<1>(*e) == dead) {
              degree[std::get<0>(*e)]--;
              degree[std::get<1>(*e)]--;
              e = folded.erase(e);
              pruned = true;
            } else
              ++e;
          }
          it = degree.erase(it);
        } else
          ++it;
      }
    }

    // canonical BFS relabeling from the base
    std::map<std::size_t, std::vector<long>> outAdj, inAdj;
    auto ensure = [&](std::size_t v) {
      if (!outAdj.count(v)) {
        outAdj[v] = std::vector<long>(ambient_rank, none);
        inAdj[v] = std::vector<long>(ambient_rank, none);
      }
    };
    ensure(find(0));
    for (const auto& [f, t, l] : folded) {
      ensure(f);
      ensure(t);
      outAdj[f][l] = static_cast<long>(t);
      inAdj[t][l] = static_cast<long>(f);
    }

    std::map<std::size_t, std::size_t> relabel;
    std::vector<std::size_t> order;
    std::queue<std::size_t> q;
    q.push(find(0));
    relabel[find(0)] = 0;
    order.push_back(find(0));
    while (!q.empty()) {
      std::size_t v = q.front();
      q.pop();
      for (std::size_t l = 0; l < ambient_rank; ++l) {
        for (long w : {outAdj[v][l], inAdj[v][l]}) {
          if (w == none) continue;
          std::size_t u = static_cast<std::size_t>(w);
          if (!relabel.count(u)) {
            relabel[u] = order.size();
            order.push_back(u);
            q.push(u);
          }
        }
      }
    }

    SubgroupGraph g;
    g.rank_ = ambient_rank;
    g.out_.assign(order.size(), std::vector<long>(ambient_rank, none));
    g.in_.assign(order.size(), std::vector<long>(ambient_rank, none));
    for (std::size_t v = 0; v < order.size(); ++v)
      for (std::size_t l = 0; l < ambient_rank; ++l) {
        long t = outAdj[order[v]][l];
        if (t != none) {
          std::size_t tt = relabel.at(static_cast<std::size_t>(t));
          g.out_[v][l] = static_cast<long>(tt);
          g.in_[tt][l] = static_cast<long>(v);
        }
      }
    return g;
  }

  std::size_t ambient_rank() const { return rank_; }
  std::size_t vertex_count() const { return out_.size(); }

  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& row : out_)
      for (long t : row)
        if (t != none) ++e;
    return e;
  }

  /// First Betti number of the core graph = subgroup rank (Nielsen-Schreier).
  std::size_t rank() const { return edge_count() - vertex_count() + 1; }

  /// True iff w labels a closed path at the base vertex.
  bool membership(const Word& w) const {
    long v = 0;
    for (Letter l : free_reduce(w)) {
      std::size_t j = generator_index(l);
      if (j >= rank_) return false;
      v = l > 0 ? out_[static_cast<std::size_t>(v)][j]
                : in_[static_cast<std::size_t>(v)][j];
      if (v == none) return false;
    }
    return v == 0;
  }

  /// Finite index iff the graph is a covering of the rose (every vertex
  /// carries all 2n labels); infinite index is the generic case and is
  /// reported as nullopt, not an error.
  std::optional<std::size_t> index() const {
    for (std::size_t v = 0; v < vertex_count(); ++v)
      for (std::size_t l = 0; l < rank_; ++l)
        if (out_[v][l] == none || in_[v][l] == none) return std::nullopt;
    return vertex_count();
  }

  bool operator==(const SubgroupGraph& o) const {
    return rank_ == o.rank_ && out_ == o.out_ && in_ == o.in_;
  }

  const std::vector<std::vector<long>>& out_edges() const { return out_; }
  const std::vector<std::vector<long>>& in_edges() const { return in_; }

 private:
  std::size_t rank_ = 0;
  std::vector<std::vector<long>> out_, in_;
};

struct IndexAndRank {
  std::optional<std::size_t> index;  // nullopt = infinite
  std::size_t rank;
};

inline IndexAndRank index_and_rank(const SubgroupGraph& g) {
  return {g.index(), g.rank()};
}

/// Surjectivity onto a free target: the image subgroup folds to the full
/// rose, i.e. has index 1.
inline bool is_surjective_to_free(const GroupHom& h) {
  if (!h.target.is_free())
    throw std::invalid_argument("is_surjective_to_free: target not free");
  SubgroupGraph g = SubgroupGraph::fold(h.images, h.target.rank());
  auto idx = g.index();
  return idx.has_value() && *idx == 1;
}

}  // namespace kfib
