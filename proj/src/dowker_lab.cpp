#include "spindle/dowker_lab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace spindle {

namespace {

constexpr double kInfeasible = -1e100;

struct Sampler {
  double perimeter = 0.0;
  std::function<Vec2(double)> eval;
};

double cap_area(const DiskRef& C, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  if (C->is_circle()) {
    const double r = C->circle_radius();
    const double ell = d.norm();
    if (ell > 2.0 * r) return kInfeasible;
    const double beta = 2.0 * std::asin(std::min(1.0, ell / (2.0 * r)));
    return 0.5 * r * r * (beta - std::sin(beta));
  }
  const BoundaryCurve& c = C->boundary();
  const double g = c.gauge(0.5 * d);
  if (g > 1.0 + 1e-9) return kInfeasible;
  SpindleArc arc;
  if (g > 1.0 - 1e-7) {
    // tangent chord: by o-symmetry the arc is exactly half the boundary
    arc.S = c.param_at_position_angle(std::atan2(-d.y(), -d.x()));
    arc.T = arc.S + 0.5 * c.length();
    arc.translate = 0.5 * (a + b);
  } else {
    arc = spindle_arc(C, a, b);
  }
  const double arcint =
      c.area_integral(arc.S, arc.T) +
      cross2(arc.translate, c.position(arc.T) - c.position(arc.S));
  return 0.5 * (arcint + cross2(b, a));
}

double edge_weight(const DiskRef& C, const Vec2& a, const Vec2& b) {
  const double cap = cap_area(C, a, b);
  if (cap == kInfeasible) return kInfeasible;
  return 0.5 * cross2(a, b) + cap;
}

double ngon_area_sigma(const Sampler& K, const DiskRef& C,
                       const std::vector<double>& sig) {
  const int n = static_cast<int>(sig.size());
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    const Vec2 a = K.eval(sig[k]);
    const Vec2 b = K.eval(sig[(k + 1) % n]);
    const double w = edge_weight(C, a, b);
    if (w == kInfeasible) return kInfeasible;
    total += w;
  }
  return total;
}

InscribedResult dp_core(const Sampler& K, const DiskRef& C, int n, int M,
                        bool refine) {
  if (n < 2) throw Error("max_inscribed_area: n must be >= 2");
  if (M < n) throw Error("max_inscribed_area: grid smaller than n");
  const double P = K.perimeter;
  std::vector<Vec2> v(M);
  for (int i = 0; i < M; ++i) v[i] = K.eval(P * i / M);

  std::vector<double> table;
  const bool cache = (M <= 2048);
  if (cache) {
    table.assign(static_cast<std::size_t>(M) * M, kInfeasible);
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j)
        if (i != j) table[static_cast<std::size_t>(i) * M + j] =
            edge_weight(C, v[i], v[j]);
  }
  auto w = [&](int i, int j) {
    return cache ? table[static_cast<std::size_t>(i) * M + j]
                 : edge_weight(C, v[i], v[j]);
  };

  std::vector<int> roots;
  if (M <= 64) {
    roots.resize(M);
    for (int i = 0; i < M; ++i) roots[i] = i;
  } else {
    const int step = (M + n - 1) / n;
    for (int i = 0; i < M; i += step) roots.push_back(i);
  }

  double best = kInfeasible;
  std::vector<int> best_chain;
  std::vector<double> prev(M), cur(M);
  std::vector<std::vector<int>> parent(n, std::vector<int>(M, -1));
  for (int r : roots) {
    // relative index j stands for grid point (r + j) % M
    auto abs_idx = [&](int j) { return (r + j) % M; };
    for (int j = 1; j < M; ++j) prev[j] = w(r, abs_idx(j));
    for (int k = 2; k <= n - 1; ++k) {
      auto& par = parent[k];
      for (int j = k; j < M; ++j) {
        double bestv = kInfeasible;
        int besti = -1;
        for (int i = k - 1; i < j; ++i) {
          if (prev[i] == kInfeasible) continue;
          const double ww = w(abs_idx(i), abs_idx(j));
          if (ww == kInfeasible) continue;
          const double cand = prev[i] + ww;
          if (cand > bestv) {
            bestv = cand;
            besti = i;
          }
        }
        cur[j] = bestv;
        par[j] = besti;
      }
      std::swap(prev, cur);
    }
    for (int j = n - 1; j < M; ++j) {
      if (prev[j] == kInfeasible) continue;
      const double ww = w(abs_idx(j), r);
      if (ww == kInfeasible) continue;
      const double total = prev[j] + ww;
      if (total > best) {
        best = total;
        best_chain.assign(1, j);
        for (int k = n - 1; k >= 2; --k)
          best_chain.push_back(parent[k][best_chain.back()]);
        best_chain.push_back(0);
        std::reverse(best_chain.begin(), best_chain.end());
        for (int& idx : best_chain) idx = abs_idx(idx);
      }
    }
  }
  if (best == kInfeasible)
    throw Error("max_inscribed_area: no feasible vertex chain (is K C-convex?)");

  InscribedResult res;
  res.grid = M;
  res.sigmas.resize(n);
  for (int k = 0; k < n; ++k) res.sigmas[k] = P * best_chain[k] / M;
  res.area = best;

  if (refine) {
    const double gold = (std::sqrt(5.0) - 1.0) / 2.0;
    double h = P / M;
    double current = best;
    for (int sweep = 0; sweep < 3; ++sweep) {
      for (int k = 0; k < n; ++k) {
        double a = res.sigmas[k] - h, b = res.sigmas[k] + h;
        auto f = [&](double x) {
          std::vector<double> trial = res.sigmas;
          trial[k] = x;
          return ngon_area_sigma(K, C, trial);
        };
        double x1 = b - gold * (b - a), x2 = a + gold * (b - a);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < 40; ++it) {
          if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gold * (b - a);
            f2 = f(x2);
          } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gold * (b - a);
            f1 = f(x1);
          }
        }
        const double xb = 0.5 * (a + b), fb = f(xb);
        if (fb > current) {
          res.sigmas[k] = xb;
          current = fb;
        }
      }
      ++res.refine_sweeps;
      if (current - best <= 1e-12 * std::max(1.0, best) && sweep > 0) break;
      h *= 0.5;
    }
    res.area = current;
  }
  res.vertices.resize(n);
  for (int k = 0; k < n; ++k) res.vertices[k] = K.eval(res.sigmas[k]);
  return res;
}

Sampler make_sampler(const CPolygon& K) {
  return {K.perimeter(), [&K](double s) { return K.eval(s).position; }};
}

Sampler make_sampler(const BoundaryCurve& K) {
  return {K.length(), [&K](double s) { return K.position(s); }};
}

}  // namespace

InscribedResult max_inscribed_area(const CPolygon& K, const DiskRef& C, int n,
                                   int M) {
  return dp_core(make_sampler(K), C, n, M, true);
}

InscribedResult max_inscribed_area(const BoundaryCurve& K, const DiskRef& C,
                                   int n, int M) {
  return dp_core(make_sampler(K), C, n, M, true);
}

InscribedResult max_inscribed_area_grid(const CPolygon& K, const DiskRef& C,
                                        int n, int M) {
  return dp_core(make_sampler(K), C, n, M, false);
}

double c_ngon_area(const DiskRef& C, const std::vector<Vec2>& vertices) {
  const int n = static_cast<int>(vertices.size());
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    const double w = edge_weight(C, vertices[k], vertices[(k + 1) % n]);
    if (w == kInfeasible)
      throw Error("c_ngon_area: infeasible edge chord");
    total += w;
  }
  return total;
}

DowkerReport dowker_report(const CPolygon& K, const DiskRef& C, int n_min,
                           int n_max, int M) {
  if (n_min < 3 || n_max < n_min + 2)
    throw Error("dowker_report: need n_min >= 3 and n_max >= n_min + 2");
  DowkerReport rep;
  for (int n = n_min; n <= n_max; ++n) {
    auto res = max_inscribed_area(K, C, n, M);
    DowkerEntry e;
    e.area = res.area;
    e.sigmas = res.sigmas;
    e.grid = res.grid;
    e.refine_sweeps = res.refine_sweeps;
    rep.entries[n] = std::move(e);
  }
  for (int n = n_min + 1; n <= n_max - 1; ++n)
    rep.second_differences[n] = rep.entries[n - 1].area +
                                rep.entries[n + 1].area -
                                2.0 * rep.entries[n].area;
  return rep;
}

QuadrangleCase quadrangle_check(const CPolygon& K, const DiskRef& C, double s1,
                                double s2, double s3, double s4) {
  const double P = K.perimeter();
  const double u2 = wrap(s2 - s1, P), u3 = wrap(s3 - s1, P), u4 = wrap(s4 - s1, P);
  if (!(u2 <= u3 && u3 <= u4))
    throw Error("quadrangle_check: points not in counterclockwise order");
  QuadrangleCase c;
  c.s1 = s1;
  c.s2 = s1 + u2;
  c.s3 = s1 + u3;
  c.s4 = s1 + u4;
  c.turning = (u4 == 0.0) ? 0.0 : K.turning(s1, c.s4);
  if (c.turning >= kPi)
    throw Error("quadrangle_check: arc turning not below pi");
  c.lhs = region_area(K, C, c.s1, c.s4) + region_area(K, C, c.s2, c.s3);
  c.rhs = region_area(K, C, c.s1, c.s3) + region_area(K, C, c.s2, c.s4);
  c.holds = c.lhs >= c.rhs - 1e-10 * K.area();
  return c;
}

std::vector<QuadrangleCase> quadrangle_sweep(const CPolygon& K, const DiskRef& C,
                                             int samples, std::uint64_t seed) {
  std::vector<QuadrangleCase> violations;
  Rng rng(seed, "quadrangle-sweep");
  const double P = K.perimeter();
  for (int i = 0; i < samples; ++i) {
    const double s1 = rng.uniform(0.0, P);
    // spans log-uniform down to small windows so local violations are found
    const double span = P * std::exp(rng.uniform(std::log(1e-3), std::log(0.45)));
    double u2 = rng.uniform(0.0, span), u3 = rng.uniform(0.0, span);
    if (u2 > u3) std::swap(u2, u3);
    const double s4 = s1 + span;
    double turning;
    try {
      turning = K.turning(s1, s4);
    } catch (const Error&) {
      continue;
    }
    if (turning >= kPi - 1e-6) continue;
    try {
      QuadrangleCase c = quadrangle_check(K, C, s1, s1 + u2, s1 + u3, s4);
      if (!c.holds) violations.push_back(c);
    } catch (const Error&) {
      continue;  // infeasible chord inside the window
    }
  }
  return violations;
}

}  // namespace spindle
