#ifndef DGSCHED_MATCHING_HPP
#define DGSCHED_MATCHING_HPP

// Maximum weight matching on general graphs (Edmonds' blossom algorithm with
// a primal-dual update, O(V^3)) and the greedy maximal matching heuristic.
//
// The blossom routine follows the classic formulation used by Van Rantwijk's
// mwmatching: vertices 0..n-1, blossoms n..2n-1, edge endpoints p encode edge
// p/2 and side p%2. With integral weights every dual stays integral, so
// the solver is exact for integer W.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <type_traits>
#include <vector>

namespace dgsched {

template <typename W>
struct WeightedEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  W weight{};
};

namespace detail {

template <typename W>
class BlossomMatcher {
public:
  BlossomMatcher(std::size_t nvertex, std::span<const WeightedEdge<W>> edges)
      : nv_(static_cast<long>(nvertex)), ne_(static_cast<long>(edges.size())), edges_(edges.begin(), edges.end()) {}

  /// mate[v] = matched vertex or -1.
  std::vector<long> solve() {
    std::vector<long> result(static_cast<std::size_t>(nv_), -1);
    if (ne_ == 0 || nv_ == 0) return result;
    init();
    for (long stage = 0; stage < nv_; ++stage) {
      std::fill(label_.begin(), label_.end(), 0);
      std::fill(bestedge_.begin(), bestedge_.end(), -1);
      for (long b = nv_; b < 2 * nv_; ++b) blossombestedges_[b].clear(), hasbest_[b] = false;
      std::fill(allowedge_.begin(), allowedge_.end(), false);
      queue_.clear();
      for (long v = 0; v < nv_; ++v)
        if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);

      bool augmented = false;
      for (;;) {
        while (!queue_.empty() && !augmented) {
          const long v = queue_.back();
          queue_.pop_back();
          for (long p : neighbend_[v]) {
            const long k = p / 2;
            const long w = endpoint_[p];
            if (inblossom_[v] == inblossom_[w]) continue;
            W kslack{};
            if (!allowedge_[k]) {
              kslack = slack(k);
              if (kslack <= W{}) allowedge_[k] = true;
            }
            if (allowedge_[k]) {
              if (label_[inblossom_[w]] == 0) {
                assign_label(w, 2, p ^ 1);
              } else if (label_[inblossom_[w]] == 1) {
                const long base = scan_blossom(v, w);
                if (base >= 0) {
                  add_blossom(base, k);
                } else {
                  augment_matching(k);
                  augmented = true;
                  break;
                }
              } else if (label_[w] == 0) {
                label_[w] = 2;
                labelend_[w] = p ^ 1;
              }
            } else if (label_[inblossom_[w]] == 1) {
              const long b = inblossom_[v];
              if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
            } else if (label_[w] == 0) {
              if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
            }
          }
        }
        if (augmented) break;

        // Dual adjustment.
        int deltatype = 1;
        W delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + nv_);
        long deltaedge = -1;
        long deltablossom = -1;
        for (long v = 0; v < nv_; ++v) {
          if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
            const W d = slack(bestedge_[v]);
            if (d < delta) {
              delta = d;
              deltatype = 2;
              deltaedge = bestedge_[v];
            }
          }
        }
        for (long b = 0; b < 2 * nv_; ++b) {
          if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
            const W d = half(slack(bestedge_[b]));
            if (d < delta) {
              delta = d;
              deltatype = 3;
              deltaedge = bestedge_[b];
            }
          }
        }
        for (long b = nv_; b < 2 * nv_; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 && dualvar_[b] < delta) {
            delta = dualvar_[b];
            deltatype = 4;
            deltablossom = b;
          }
        }
        for (long v = 0; v < nv_; ++v) {
          if (label_[inblossom_[v]] == 1) dualvar_[v] -= delta;
          else if (label_[inblossom_[v]] == 2) dualvar_[v] += delta;
        }
        for (long b = nv_; b < 2 * nv_; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
            if (label_[b] == 1) dualvar_[b] += delta;
            else if (label_[b] == 2) dualvar_[b] -= delta;
          }
        }
        if (deltatype == 1) {
          break;
        } else if (deltatype == 2) {
          allowedge_[deltaedge] = true;
          long i = static_cast<long>(edges_[deltaedge].u);
          long j = static_cast<long>(edges_[deltaedge].v);
          if (label_[inblossom_[i]] == 0) std::swap(i, j);
          queue_.push_back(i);
        } else if (deltatype == 3) {
          allowedge_[deltaedge] = true;
          queue_.push_back(static_cast<long>(edges_[deltaedge].u));
        } else {
          expand_blossom(deltablossom, false);
        }
      }
      if (!augmented) break;
      for (long b = nv_; b < 2 * nv_; ++b)
        if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dualvar_[b] == W{})
          expand_blossom(b, true);
    }
    for (long v = 0; v < nv_; ++v)
      if (mate_[v] >= 0) result[static_cast<std::size_t>(v)] = endpoint_[mate_[v]];
    return result;
  }

private:
  static W half(W x) {
    if constexpr (std::is_integral_v<W>) return x / 2;
    else return x / 2;
  }

  void init() {
    const auto n2 = static_cast<std::size_t>(2 * nv_);
    W maxweight{};
    for (const auto& e : edges_) maxweight = std::max(maxweight, e.weight);
    endpoint_.resize(static_cast<std::size_t>(2 * ne_));
    for (long p = 0; p < 2 * ne_; ++p)
      endpoint_[p] = static_cast<long>(p % 2 == 0 ? edges_[p / 2].u : edges_[p / 2].v);
    neighbend_.assign(static_cast<std::size_t>(nv_), {});
    for (long k = 0; k < ne_; ++k) {
      neighbend_[edges_[k].u].push_back(2 * k + 1);
      neighbend_[edges_[k].v].push_back(2 * k);
    }
    mate_.assign(static_cast<std::size_t>(nv_), -1);
    label_.assign(n2, 0);
    labelend_.assign(n2, -1);
    inblossom_.resize(static_cast<std::size_t>(nv_));
    std::iota(inblossom_.begin(), inblossom_.end(), 0L);
    blossomparent_.assign(n2, -1);
    blossomchilds_.assign(n2, {});
    blossombase_.assign(n2, -1);
    for (long v = 0; v < nv_; ++v) blossombase_[v] = v;
    blossomendps_.assign(n2, {});
    bestedge_.assign(n2, -1);
    blossombestedges_.assign(n2, {});
    hasbest_.assign(n2, false);
    unusedblossoms_.clear();
    for (long b = nv_; b < 2 * nv_; ++b) unusedblossoms_.push_back(b);
    dualvar_.assign(n2, W{});
    for (long v = 0; v < nv_; ++v) dualvar_[v] = maxweight;
    allowedge_.assign(static_cast<std::size_t>(ne_), false);
  }

  W slack(long k) const {
    const auto& e = edges_[k];
    return dualvar_[e.u] + dualvar_[e.v] - 2 * e.weight;
  }

  void blossom_leaves(long b, std::vector<long>& out) const {
    if (b < nv_) {
      out.push_back(b);
      return;
    }
    for (long t : blossomchilds_[b]) blossom_leaves(t, out);
  }

  std::vector<long> leaves(long b) const {
    std::vector<long> out;
    blossom_leaves(b, out);
    return out;
  }

  void assign_label(long w, int t, long p) {
    const long b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
      blossom_leaves(b, queue_);
    } else if (t == 2) {
      const long base = blossombase_[b];
      assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
  }

  long scan_blossom(long v, long w) {
    std::vector<long> path;
    long base = -1;
    while (v != -1 || w != -1) {
      long b = inblossom_[v];
      if (label_[b] & 4) {
        base = blossombase_[b];
        break;
      }
      path.push_back(b);
      label_[b] = 5;
      if (labelend_[b] == -1) {
        v = -1;
      } else {
        v = endpoint_[labelend_[b]];
        b = inblossom_[v];
        v = endpoint_[labelend_[b]];
      }
      if (w != -1) std::swap(v, w);
    }
    for (long b : path) label_[b] = 1;
    return base;
  }

  void add_blossom(long base, long k) {
    long v = static_cast<long>(edges_[k].u);
    long w = static_cast<long>(edges_[k].v);
    const long bb = inblossom_[base];
    long bv = inblossom_[v];
    long bw = inblossom_[w];
    const long b = unusedblossoms_.back();
    unusedblossoms_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;
    auto& path = blossomchilds_[b];
    auto& endps = blossomendps_[b];
    path.clear();
    endps.clear();
    while (bv != bb) {
      blossomparent_[bv] = b;
      path.push_back(bv);
      endps.push_back(labelend_[bv]);
      v = endpoint_[labelend_[bv]];
      bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
      blossomparent_[bw] = b;
      path.push_back(bw);
      endps.push_back(labelend_[bw] ^ 1);
      w = endpoint_[labelend_[bw]];
      bw = inblossom_[w];
    }
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dualvar_[b] = W{};
    for (long leaf : leaves(b)) {
      if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
      inblossom_[leaf] = b;
    }
    std::vector<long> bestedgeto(static_cast<std::size_t>(2 * nv_), -1);
    for (long sub : path) {
      std::vector<std::vector<long>> nblists;
      if (!hasbest_[sub]) {
        for (long leaf : leaves(sub)) {
          std::vector<long> lst;
          for (long p : neighbend_[leaf]) lst.push_back(p / 2);
          nblists.push_back(std::move(lst));
        }
      } else {
        nblists.push_back(blossombestedges_[sub]);
      }
      for (const auto& nblist : nblists) {
        for (long kk : nblist) {
          long i = static_cast<long>(edges_[kk].u);
          long j = static_cast<long>(edges_[kk].v);
          if (inblossom_[j] == b) std::swap(i, j);
          const long bj = inblossom_[j];
          if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj])))
            bestedgeto[bj] = kk;
        }
      }
      blossombestedges_[sub].clear();
      hasbest_[sub] = false;
      bestedge_[sub] = -1;
    }
    blossombestedges_[b].clear();
    for (long kk : bestedgeto)
      if (kk != -1) blossombestedges_[b].push_back(kk);
    hasbest_[b] = true;
    bestedge_[b] = -1;
    for (long kk : blossombestedges_[b])
      if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
  }

  static long wrap(long j, long n) { return j < 0 ? j + n : j; }

  void expand_blossom(long b, bool endstage) {
    const std::vector<long> childs = blossomchilds_[b];
    for (long s : childs) {
      blossomparent_[s] = -1;
      if (s < nv_) {
        inblossom_[s] = s;
      } else if (endstage && dualvar_[s] == W{}) {
        expand_blossom(s, endstage);
      } else {
        for (long leaf : leaves(s)) inblossom_[leaf] = s;
      }
    }
    if (!endstage && label_[b] == 2) {
      auto& ch = blossomchilds_[b];
      auto& ep = blossomendps_[b];
      const long len = static_cast<long>(ch.size());
      const long entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
      long j = static_cast<long>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
      long jstep;
      long endptrick;
      if (j & 1) {
        j -= len;
        jstep = 1;
        endptrick = 0;
      } else {
        jstep = -1;
        endptrick = 1;
      }
      long p = labelend_[b];
      while (j != 0) {
        label_[endpoint_[p ^ 1]] = 0;
        label_[endpoint_[ep[wrap(j - endptrick, len)] ^ endptrick ^ 1]] = 0;
        assign_label(endpoint_[p ^ 1], 2, p);
        allowedge_[ep[wrap(j - endptrick, len)] / 2] = true;
        j += jstep;
        p = ep[wrap(j - endptrick, len)] ^ endptrick;
        allowedge_[p / 2] = true;
        j += jstep;
      }
      long bv = ch[wrap(j, len)];
      label_[endpoint_[p ^ 1]] = label_[bv] = 2;
      labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
      bestedge_[bv] = -1;
      j += jstep;
      while (ch[wrap(j, len)] != entrychild) {
        bv = ch[wrap(j, len)];
        if (label_[bv] == 1) {
          j += jstep;
          continue;
        }
        long found = -1;
        for (long leaf : leaves(bv))
          if (label_[leaf] != 0) {
            found = leaf;
            break;
          }
        if (found != -1) {
          label_[found] = 0;
          label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
          assign_label(found, 2, labelend_[found]);
        }
        j += jstep;
      }
    }
    label_[b] = labelend_[b] = -1;
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombase_[b] = -1;
    blossombestedges_[b].clear();
    hasbest_[b] = false;
    bestedge_[b] = -1;
    unusedblossoms_.push_back(b);
  }

  void augment_blossom(long b, long v) {
    long t = v;
    while (blossomparent_[t] != b) t = blossomparent_[t];
    if (t >= nv_) augment_blossom(t, v);
    auto& ch = blossomchilds_[b];
    auto& ep = blossomendps_[b];
    const long len = static_cast<long>(ch.size());
    const long i = static_cast<long>(std::find(ch.begin(), ch.end(), t) - ch.begin());
    long j = i;
    long jstep;
    long endptrick;
    if (i & 1) {
      j -= len;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    while (j != 0) {
      j += jstep;
      t = ch[wrap(j, len)];
      const long p = ep[wrap(j - endptrick, len)] ^ endptrick;
      if (t >= nv_) augment_blossom(t, endpoint_[p]);
      j += jstep;
      t = ch[wrap(j, len)];
      if (t >= nv_) augment_blossom(t, endpoint_[p ^ 1]);
      mate_[endpoint_[p]] = p ^ 1;
      mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(ch.begin(), ch.begin() + i, ch.end());
    std::rotate(ep.begin(), ep.begin() + i, ep.end());
    blossombase_[b] = blossombase_[ch[0]];
  }

  void augment_matching(long k) {
    const long v = static_cast<long>(edges_[k].u);
    const long w = static_cast<long>(edges_[k].v);
    const long starts[2][2] = {{v, 2 * k + 1}, {w, 2 * k}};
    for (const auto& sp : starts) {
      long s = sp[0];
      long p = sp[1];
      for (;;) {
        const long bs = inblossom_[s];
        if (bs >= nv_) augment_blossom(bs, s);
        mate_[s] = p;
        if (labelend_[bs] == -1) break;
        const long t = endpoint_[labelend_[bs]];
        const long bt = inblossom_[t];
        s = endpoint_[labelend_[bt]];
        const long j = endpoint_[labelend_[bt] ^ 1];
        if (bt >= nv_) augment_blossom(bt, j);
        mate_[j] = labelend_[bt];
        p = labelend_[bt] ^ 1;
      }
    }
  }

  long nv_;
  long ne_;
  std::vector<WeightedEdge<W>> edges_;
  std::vector<long> endpoint_;
  std::vector<std::vector<long>> neighbend_;
  std::vector<long> mate_;
  std::vector<int> label_;
  std::vector<long> labelend_;
  std::vector<long> inblossom_;
  std::vector<long> blossomparent_;
  std::vector<std::vector<long>> blossomchilds_;
  std::vector<long> blossombase_;
  std::vector<std::vector<long>> blossomendps_;
  std::vector<long> bestedge_;
  std::vector<std::vector<long>> blossombestedges_;
  std::vector<bool> hasbest_;
  std::vector<long> unusedblossoms_;
  std::vector<W> dualvar_;
  std::vector<bool> allowedge_;
  std::vector<long> queue_;
};

} // namespace detail

/// Maximum weight matching (not necessarily maximum cardinality). Returns the
/// indices of the matched edges in increasing order. Edges with weight <= 0
/// never improve a matching and are ignored; parallel edges are allowed.
template <typename W>
std::vector<std::size_t> max_weight_matching(std::size_t num_vertices, std::span<const WeightedEdge<W>> edges) {
  // Keep the heaviest (then lowest-index) edge per vertex pair.
  std::vector<WeightedEdge<W>> kept;
  std::vector<std::size_t> origin;
  {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i].weight > W{} && edges[i].u != edges[i].v) order.push_back(i);
    auto key = [&](std::size_t i) {
      return std::pair{std::min(edges[i].u, edges[i].v), std::max(edges[i].u, edges[i].v)};
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (key(a) != key(b)) return key(a) < key(b);
      return edges[a].weight > edges[b].weight;
    });
    for (std::size_t idx = 0; idx < order.size(); ++idx) {
      const std::size_t i = order[idx];
      if (idx > 0 && key(order[idx - 1]) == key(i)) continue;
      kept.push_back(edges[i]);
      origin.push_back(i);
    }
  }
  detail::BlossomMatcher<W> solver(num_vertices, kept);
  const auto mate = solver.solve();
  std::vector<std::size_t> chosen;
  for (std::size_t k = 0; k < kept.size(); ++k)
    if (mate[kept[k].u] == static_cast<long>(kept[k].v)) chosen.push_back(origin[k]);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

/// Greedy maximal matching: repeatedly take the heaviest remaining edge
/// (ties broken by lowest index) whose endpoints are both free. Achieves at
/// least half of the maximum weight.
template <typename W>
std::vector<std::size_t> greedy_maximal_matching(std::size_t num_vertices, std::span<const WeightedEdge<W>> edges) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].weight > W{} && edges[i].u != edges[i].v) order.push_back(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return edges[a].weight > edges[b].weight; });
  std::vector<bool> used(num_vertices, false);
  std::vector<std::size_t> chosen;
  for (std::size_t i : order) {
    if (used[edges[i].u] || used[edges[i].v]) continue;
    used[edges[i].u] = used[edges[i].v] = true;
    chosen.push_back(i);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

template <typename W>
W matching_weight(std::span<const WeightedEdge<W>> edges, std::span<const std::size_t> chosen) {
  W s{};
  for (std::size_t i : chosen) s += edges[i].weight;
  return s;
}

} // namespace dgsched

#endif // DGSCHED_MATCHING_HPP
