#include "splab/dyadic/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "splab/core/hashgrid.hpp"
#include "splab/core/parallel.hpp"
#include "splab/core/rng.hpp"
#include "splab/metrics/metrics.hpp"

namespace splab::dyadic {

double assign_dist(const Domain& dom, const Cn& x, const Cn& p) {
  return metrics::boundary_quasidist(dom, x, p);
}

namespace {

/// Quasidistance is bounded below by Euclidean distance, so a Euclidean
/// hash query with the same radius returns a superset of the d_B ball.
bool separated_from_net(const Domain& dom, const HashGrid& hg, const Cn& x,
                        double r, std::vector<std::size_t>& scratch) {
  hg.query_ball(x, r, scratch);
  for (std::size_t id : scratch) {
    const Cn& p = hg.point(id);
    if (assign_dist(dom, x, p) <= r || assign_dist(dom, p, x) <= r) return false;
  }
  return true;
}

}  // namespace

std::vector<std::size_t> build_net(const Domain& dom,
                                   const std::vector<Cn>& candidates,
                                   const std::vector<Cn>& carry_over,
                                   double separation, std::uint64_t seed) {
  HashGrid hg(dom.dim(), std::max(separation, 1e-6));
  for (const auto& p : carry_over) hg.insert(p);

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.index(i)]);

  std::vector<std::size_t> picked;
  std::vector<std::size_t> scratch;
  for (std::size_t idx : order) {
    if (separated_from_net(dom, hg, candidates[idx], separation, scratch)) {
      hg.insert(candidates[idx]);
      picked.push_back(idx);
    }
  }
  return picked;
}

namespace {

/// Nearest net point among the given candidate indices (assign_dist, ties
/// to the lowest index). Returns -1 if candidates is empty.
int nearest_of(const Domain& dom, const Cn& x, const std::vector<Cn>& net,
               const std::vector<int>& candidates) {
  int best = -1;
  double bd = 1e300;
  for (int j : candidates) {
    const double d = assign_dist(dom, x, net[j]);
    if (d < bd || (d == bd && (best < 0 || j < best))) {
      bd = d;
      best = j;
    }
  }
  return best;
}

std::vector<int> all_indices(std::size_t n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

std::pair<int, int> DyadicGrid::locate_boundary(const Cn& xi, int k) const {
  int cube = nearest_of(*dom_, xi, levels_[0].net, all_indices(levels_[0].net.size()));
  int lev = 0;
  while (lev < k) {
    const auto& kids = levels_[lev].children;
    if (cube >= static_cast<int>(kids.size()) || kids[cube].empty()) break;
    const int next = nearest_of(*dom_, xi, levels_[lev + 1].net, kids[cube]);
    if (next < 0) break;
    cube = next;
    ++lev;
  }
  return {lev, cube};
}

DyadicGrid build_grid(std::shared_ptr<const Domain> dom, const GridConfig& cfg,
                      int grid_id) {
  const Domain& d = *dom;
  DyadicGrid g;
  g.dom_ = dom;
  g.cfg_ = cfg;
  g.id_ = grid_id;

  // the dense pool depends only on cfg.seed: adjacent grids share it and
  // differ through their greedy orders and survey draws
  g.dense_ = sample_boundary_global(d, cfg.dense_global, item_seed(cfg.seed, 77));
  const std::size_t N = g.dense_.size();

  // ---------- full-cover levels, capped by net size / sample resolution
  int k = 0;
  std::vector<int> assign_prev;  // dense assignment at previous level
  for (; k <= cfg.levels; ++k) {
    const double r_k = cfg.delta_cal * std::pow(cfg.s, -k);
    std::vector<Cn> carry;
    if (k > 0) carry = g.levels_[k - 1].net;

    const std::size_t m = std::min<std::size_t>(cfg.net_candidates, N);
    const std::vector<Cn> pool(g.dense_.points.begin(),
                               g.dense_.points.begin() + m);
    const auto picked = build_net(d, pool, carry, r_k,
                                  item_seed(cfg.seed, 100 + 13 * k + grid_id));
    GridLevel lev;
    lev.k = k;
    lev.scale = r_k;
    lev.full = true;
    lev.net = carry;
    for (std::size_t idx : picked) lev.net.push_back(pool[idx]);

    if (k > 0 &&
        static_cast<int>(lev.net.size()) > cfg.max_global_net) {
      break;  // next levels go through the survey construction
    }
    if (lev.net.size() >= N / 8 && k > 0) break;  // sample resolution cap

    // parents: carried points keep their own cube; new points attach to the
    // nearest cube of the previous level through the dense assignment of
    // their own position (nearest previous-level net point).
    if (k == 0) {
      lev.parent.assign(lev.net.size(), -1);
    } else {
      // Parent through the same iterated walk that assigns arbitrary
      // boundary points, so a net point's own chain is its cube's chain.
      lev.parent.resize(lev.net.size());
      const auto& prev = g.levels_[k - 1];
      for (std::size_t j = 0; j < lev.net.size(); ++j) {
        if (j < prev.net.size()) {
          lev.parent[j] = static_cast<int>(j);  // carried over: own cube
        } else {
          const auto [lr, cube] = g.locate_boundary(lev.net[j], k - 1);
          if (lr != k - 1)
            throw std::runtime_error("build_grid: walk failed at level " +
                                     std::to_string(k));
          lev.parent[j] = cube;
        }
      }
    }
    g.levels_.push_back(std::move(lev));

    // children lists of the previous level
    if (k > 0) {
      auto& prev = g.levels_[k - 1];
      prev.children.assign(prev.net.size(), {});
      for (std::size_t j = 0; j < g.levels_[k].net.size(); ++j)
        prev.children[g.levels_[k].parent[j]].push_back(static_cast<int>(j));
    }

    // dense assignment: iterated nearest-child
    auto& cur = g.levels_[k];
    std::vector<int> assign(N);
    if (k == 0) {
      HashGrid hg(d.dim(), cur.scale);
      for (const auto& p : cur.net) hg.insert(p);
      par::parallel_for(N, [&](std::size_t i) {
        // hash-accelerated nearest with quasidistance re-check
        std::vector<std::size_t> cand;
        double r = cur.scale;
        int best = -1;
        double bd = 1e300;
        for (;;) {
          hg.query_ball(g.dense_.points[i], r, cand);
          for (std::size_t id : cand) {
            const double dd = assign_dist(d, g.dense_.points[i], cur.net[id]);
            if (dd < bd || (dd == bd && static_cast<int>(id) < best)) {
              bd = dd;
              best = static_cast<int>(id);
            }
          }
          // d_B >= euclidean: once bd <= r the search radius is certified
          if (best >= 0 && bd <= r) break;
          r *= 2.0;
          if (r > 1e6) break;
        }
        assign[i] = best;
      });
    } else {
      const auto& prev = g.levels_[k - 1];
      assign.assign(N, -1);
      par::parallel_for(N, [&](std::size_t i) {
        const int pc = assign_prev[i];
        if (pc < 0) return;
        assign[i] = nearest_of(d, g.dense_.points[i], cur.net, prev.children[pc]);
      });
    }
    // sigma per cube
    cur.sigma.assign(cur.net.size(), 0.0);
    for (std::size_t i = 0; i < N; ++i)
      if (assign[i] >= 0) cur.sigma[assign[i]] += g.dense_.weights[i];
    g.dense_assign_.push_back(assign);
    assign_prev = g.dense_assign_.back();
  }
  g.k_glob_ = static_cast<int>(g.levels_.size()) - 1;
  if (g.k_glob_ < 0) throw std::runtime_error("build_grid: no level built");

  // ---------- survey extension to cfg.levels
  if (g.k_glob_ < cfg.levels) {
    // choose surveyed cubes at the deepest full level
    auto& base = g.levels_[g.k_glob_];
    base.surveyed.assign(base.net.size(), 0);
    Rng pick(item_seed(cfg.seed, 500 + grid_id));
    std::vector<int> order = all_indices(base.net.size());
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[pick.index(i)]);
    const int n_sv = std::min<int>(cfg.survey_per_level,
                                   static_cast<int>(base.net.size()));
    std::vector<int> surveyed_cubes(order.begin(), order.begin() + n_sv);
    for (int j : surveyed_cubes) base.surveyed[j] = 1;

    for (int kk = g.k_glob_ + 1; kk <= cfg.levels; ++kk) {
      const double r_k = cfg.delta_cal * std::pow(cfg.s, -kk);
      auto& prev = g.levels_[kk - 1];
      GridLevel lev;
      lev.k = kk;
      lev.scale = r_k;
      lev.full = false;

      // carry: surveyed cubes continue as their own child
      std::vector<int> carry_src;  // prev cube index per carried point
      for (int j : surveyed_cubes) {
        lev.net.push_back(prev.net[j]);
        lev.parent.push_back(j);
        carry_src.push_back(j);
      }

      prev.children.assign(prev.net.size(), {});
      for (std::size_t j = 0; j < lev.net.size(); ++j)
        prev.children[lev.parent[j]].push_back(static_cast<int>(j));

      std::vector<double> sigma_child(lev.net.size(), 0.0);

      // per surveyed cube: local sample, local net, assignment, sigma
      for (std::size_t si = 0; si < surveyed_cubes.size(); ++si) {
        const int cube = surveyed_cubes[si];
        const Cn& cp = prev.net[cube];
        const double alpha =
            std::min(1.2, 5.0 * prev.scale / d.bounding_radius());
        const auto local = sample_boundary_cap(
            d, cp, alpha, cfg.dense_local,
            item_seed(cfg.seed, 1000 + 31 * kk + 7 * cube + grid_id));

        // keep sample points that belong to this cube
        std::vector<Cn> inside;
        std::vector<double> inside_w;
        for (std::size_t i = 0; i < local.size(); ++i) {
          const auto [lr, lc] = g.locate_boundary(local.points[i], kk - 1);
          if (lr == kk - 1 && lc == cube) {
            inside.push_back(local.points[i]);
            inside_w.push_back(local.weights[i]);
          }
        }
        if (inside.size() < 32) continue;  // starved cube: drop from survey

        // net inside the cube, seeded with the carried point
        std::vector<Cn> carry_here{cp};
        const auto picked =
            build_net(d, inside, carry_here, r_k,
                      item_seed(cfg.seed, 2000 + 31 * kk + 7 * cube + grid_id));
        for (std::size_t idx : picked) {
          lev.net.push_back(inside[idx]);
          lev.parent.push_back(cube);
          prev.children[cube].push_back(static_cast<int>(lev.net.size() - 1));
          sigma_child.push_back(0.0);
        }

        // sigma of the children from the local sample
        for (std::size_t i = 0; i < inside.size(); ++i) {
          const int c = nearest_of(d, inside[i], lev.net, prev.children[cube]);
          if (c >= 0) sigma_child[c] += inside_w[i];
        }
      }

      lev.sigma = sigma_child;
      g.levels_.push_back(std::move(lev));

      // next survey generation: children of surveyed cubes
      auto& justb = g.levels_[kk];
      justb.surveyed.assign(justb.net.size(), 0);
      std::vector<int> next_cubes;
      {
        std::vector<int> pool = all_indices(justb.net.size());
        for (std::size_t i = pool.size(); i > 1; --i)
          std::swap(pool[i - 1], pool[pick.index(i)]);
        for (int j : pool) {
          if (static_cast<int>(next_cubes.size()) >= cfg.survey_per_level) break;
          if (justb.sigma[j] > 0) next_cubes.push_back(j);
        }
      }
      for (int j : next_cubes) justb.surveyed[j] = 1;
      surveyed_cubes = next_cubes;
      if (surveyed_cubes.empty()) break;
    }
  }
  return g;
}

std::vector<DyadicGrid> build_adjacent_grids(std::shared_ptr<const Domain> dom,
                                             GridConfig cfg, int n_adjacent) {
  std::vector<DyadicGrid> out;
  for (int l = 0; l < n_adjacent; ++l) out.push_back(build_grid(dom, cfg, l));
  return out;
}

// --------------------------------------------------------------------- audits

SandwichFit audit_ball_sandwich(const DyadicGrid& grid, int k_lo, int k_hi) {
  const Domain& d = grid.domain();
  SandwichFit fit;
  fit.c_strict = 1e300;
  const auto& dense = grid.dense();
  std::vector<double> inner_radii;  // per-cube inner radius / scale
  for (int k = k_lo; k <= std::min(k_hi, grid.deepest_full_level()); ++k) {
    const auto& lev = grid.level(k);
    const auto& assign = grid.dense_assignment(k);
    HashGrid hg(d.dim(), lev.scale);
    for (const auto& p : lev.net) hg.insert(p);

    std::vector<double> cmin(lev.net.size(), 1.5 * lev.scale);
    std::vector<double> Cmax(lev.net.size(), 0.0);
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < dense.size(); ++i) {
      const int q = assign[i];
      if (q < 0) continue;
      Cmax[q] = std::max(Cmax[q], assign_dist(d, dense.points[i], lev.net[q]));
      hg.query_ball(dense.points[i], 1.5 * lev.scale, cand);
      for (std::size_t nb : cand) {
        if (static_cast<int>(nb) == q) continue;
        const double dd = assign_dist(d, dense.points[i], lev.net[nb]);
        cmin[nb] = std::min(cmin[nb], dd);
      }
    }
    for (std::size_t j = 0; j < lev.net.size(); ++j) {
      if (lev.sigma[j] <= 0) continue;
      ++fit.cubes;
      fit.C_fit = std::max(fit.C_fit, Cmax[j] / lev.scale);
      fit.c_strict = std::min(fit.c_strict, cmin[j] / lev.scale);
      inner_radii.push_back(cmin[j] / lev.scale);
    }
  }
  if (fit.cubes == 0) {
    fit.c_strict = 0.0;
    return fit;
  }
  // population fit: inner radius held by 99% of cubes. At scale ratio s = 2
  // the chain-drift geometric series leaves no uniform strict inner ball, so
  // a small quantile of cubes has a degenerate one.
  fit.c_fit = quantile(inner_radii, 0.01);
  return fit;
}

int max_child_count(const DyadicGrid& grid) {
  int mx = 0;
  for (const auto& lev : grid.levels())
    for (const auto& kids : lev.children)
      mx = std::max(mx, static_cast<int>(kids.size()));
  return mx;
}

AdjacencyAudit audit_adjacent_sandwich(const std::vector<DyadicGrid>& grids,
                                       int n_balls, std::uint64_t seed) {
  AdjacencyAudit out;
  if (grids.empty()) return out;
  const Domain& d = grids.front().domain();
  const auto& dense = grids.front().dense();  // shared across the family
  const std::size_t N = dense.size();
  Rng rng(seed);

  std::vector<double> dist(N);
  int success = 0;
  for (int trial = 0; trial < n_balls; ++trial) {
    const std::size_t zi = rng.index(N);
    const Cn& zeta = dense.points[zi];
    const int k_glob = grids.front().deepest_full_level();
    const double r_hi = grids.front().level(std::min(1, k_glob)).scale;
    const double r_lo = grids.front().level(k_glob).scale * 2.0;
    const double r = r_lo * std::pow(r_hi / r_lo, rng.uniform());

    par::parallel_for(N, [&](std::size_t i) {
      dist[i] = assign_dist(d, dense.points[i], zeta);
    });
    double sigma_ball = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      if (dist[i] < r) sigma_ball += dense.weights[i];
    if (sigma_ball <= 0) continue;
    ++out.balls;

    double best_inner = 0.0, best_outer = 1e300;
    for (const auto& g : grids) {
      for (int k = 0; k <= g.deepest_full_level(); ++k) {
        const int cube = g.dense_assignment(k)[zi];
        if (cube < 0) continue;
        const auto& assign = g.dense_assignment(k);
        const double sig = g.level(k).sigma[cube];
        bool inner_ok = true, outer_ok = true;
        for (std::size_t i = 0; i < N; ++i) {
          const bool in_ball = dist[i] < r;
          const bool in_cube = assign[i] == cube;
          if (in_cube && !in_ball) inner_ok = false;
          if (in_ball && !in_cube) outer_ok = false;
          if (!inner_ok && !outer_ok) break;
        }
        if (inner_ok && sig > 0) best_inner = std::max(best_inner, sig);
        if (outer_ok && sig > 0) best_outer = std::min(best_outer, sig);
      }
    }
    if (best_inner > 0 && best_outer < 1e299) {
      ++success;
      out.worst_ratio = std::max(
          out.worst_ratio,
          std::max(best_outer / sigma_ball, sigma_ball / best_inner));
    }
  }
  out.success_rate = out.balls > 0 ? static_cast<double>(success) / out.balls : 0.0;
  return out;
}

}  // namespace splab::dyadic
