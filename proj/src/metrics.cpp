#include "spindle/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spindle {

namespace {

constexpr int kDirectionGrid = 4096;
constexpr double kAtomTol = 1e-12;

// 16-point Gauss-Legendre nodes/weights on [-1, 1]
constexpr int kGL = 16;
constexpr double kGLx[kGL] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
    -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
    -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
    0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
    0.9894009349916499};
constexpr double kGLw[kGL] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
    0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
    0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
    0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
    0.0271524594117541};

double quad_arc(const std::function<double(double)>& f, double a, double b) {
  const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / 0.05)));
  double total = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const double lo = a + (b - a) * p / pieces;
    const double hi = a + (b - a) * (p + 1) / pieces;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int i = 0; i < kGL; ++i) total += half * kGLw[i] * f(mid + half * kGLx[i]);
  }
  return total;
}

bool angle_in_arc(double psi, const DirectionArc& arc, double tol) {
  const double rel = wrap(psi - arc.start, kTwoPi);
  return rel <= arc.measure() + tol || rel >= kTwoPi - tol;
}

}  // namespace

double ArcSet::total_measure() const {
  double m = 0.0;
  for (const auto& a : arcs) m += a.measure();
  return m;
}

ArcSet ArcSet::full_circle() { return {{{0.0, kTwoPi}}}; }

ArcSet ArcSet::atom(double psi) { return {{{psi, psi}}}; }

ArcSet ArcSet::arc(double start, double end) { return {{{start, end}}}; }

void ArcSet::validate() const {
  double total = 0.0;
  for (const auto& a : arcs) {
    if (a.end < a.start) throw Error("ArcSet: arc with negative length");
    total += a.measure();
  }
  if (total > kTwoPi + 1e-12) throw Error("ArcSet: total measure exceeds 2pi");
  for (std::size_t i = 0; i < arcs.size(); ++i)
    for (std::size_t j = i + 1; j < arcs.size(); ++j) {
      // disjoint mod 2pi: neither endpoint of j lies strictly inside i
      const double li = arcs[i].measure();
      const double r1 = wrap(arcs[j].start - arcs[i].start, kTwoPi);
      const double r2 = wrap(arcs[j].end - arcs[i].start, kTwoPi);
      if ((r1 < li && r1 > 0.0) || (r2 < li && r2 > 0.0) ||
          (r1 == 0.0 && arcs[j].measure() == 0.0 && li == 0.0))
        throw Error("ArcSet: overlapping arcs");
    }
}

ConvexPolygonBody::ConvexPolygonBody(std::vector<Vec2> verts, bool symmetric)
    : vertices(std::move(verts)), o_symmetric(symmetric) {
  const int n = static_cast<int>(vertices.size());
  if (n < 3) throw Error("ConvexPolygonBody: fewer than 3 vertices");
  for (int i = 0; i < n; ++i) {
    const Vec2 e1 = vertices[(i + 1) % n] - vertices[i];
    const Vec2 e2 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    if (cross2(e1, e2) <= 0.0)
      throw Error("ConvexPolygonBody: vertices not strictly convex ccw");
  }
  if (o_symmetric) {
    for (const Vec2& v : vertices) {
      bool found = false;
      for (const Vec2& w : vertices)
        if ((v + w).norm() <= 1e-12) found = true;
      if (!found) throw Error("ConvexPolygonBody: o-symmetric flag violated");
    }
  }
}

std::vector<double> ConvexPolygonBody::edge_normals() const {
  const int n = static_cast<int>(vertices.size());
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const Vec2 e = vertices[(i + 1) % n] - vertices[i];
    out[i] = wrap(std::atan2(e.y(), e.x()) - kPi / 2.0, kTwoPi);
  }
  return out;
}

std::vector<double> ConvexPolygonBody::edge_lengths() const {
  const int n = static_cast<int>(vertices.size());
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = (vertices[(i + 1) % n] - vertices[i]).norm();
  return out;
}

double ConvexPolygonBody::support(double psi) const {
  const Vec2 u(std::cos(psi), std::sin(psi));
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec2& v : vertices) best = std::max(best, u.dot(v));
  return best;
}

ConvexPolygonBody ConvexPolygonBody::square(double side, double rotation,
                                            const Vec2& center) {
  const double h = 0.5 * side;
  std::vector<Vec2> v = {{h, h}, {-h, h}, {-h, -h}, {h, -h}};
  const double c = std::cos(rotation), s = std::sin(rotation);
  for (Vec2& p : v) p = Vec2(c * p.x() - s * p.y(), s * p.x() + c * p.y()) + center;
  return ConvexPolygonBody(std::move(v), center.norm() <= 1e-15);
}

double DiskWithSpikes::support(double psi) const {
  return std::max(radius, apex * std::abs(std::cos(psi)));
}

double DiskWithSpikes::segment_normal() const {
  return std::acos(radius / apex);
}

double DiskWithSpikes::segment_mass() const {
  return std::sqrt(apex * apex - radius * radius);
}

double surface_area_measure(const SymmetricDisk& body, const ArcSet& sigma) {
  sigma.validate();
  const BoundaryCurve& c = body.boundary();
  double total = 0.0;
  for (const auto& a : sigma.arcs)
    total += quad_arc([&](double psi) { return c.curvature_radius_at_normal(psi); },
                      a.start, a.end);
  return total;
}

double surface_area_measure(const ConvexPolygonBody& body, const ArcSet& sigma) {
  sigma.validate();
  const auto normals = body.edge_normals();
  const auto lengths = body.edge_lengths();
  double total = 0.0;
  for (std::size_t i = 0; i < normals.size(); ++i)
    for (const auto& a : sigma.arcs)
      if (angle_in_arc(normals[i], a, kAtomTol)) {
        total += lengths[i];
        break;
      }
  return total;
}

double surface_area_measure(const DiskWithSpikes& body, const ArcSet& sigma) {
  sigma.validate();
  const double psi0 = body.segment_normal();
  const double mass = body.segment_mass();
  double total = 0.0;
  for (const auto& a : sigma.arcs) {
    // circular part carries density radius on dist(psi, {0, pi}) > psi0;
    // exact interval overlaps, no quadrature across the discontinuity
    const double s = wrap(a.start, kTwoPi);
    const double e = s + a.measure();
    for (double lo : {psi0, kPi + psi0}) {
      const double hi = lo + kPi - 2.0 * psi0;
      for (int k = -1; k <= 1; ++k) {
        const double ov = std::min(e, hi + kTwoPi * k) - std::max(s, lo + kTwoPi * k);
        if (ov > 0.0) total += body.radius * ov;
      }
    }
    for (double atom : {psi0, -psi0, kPi - psi0, kPi + psi0})
      if (angle_in_arc(atom, a, kAtomTol)) total += mass;
  }
  return total;
}

PMDistanceResult pm_distance_smooth(const SymmetricDisk& C,
                                    const SymmetricDisk& D) {
  const BoundaryCurve& bc = C.boundary();
  const BoundaryCurve& bd = D.boundary();
  auto diff = [&](double psi) {
    return std::abs(bc.curvature_radius_at_normal(psi) -
                    bd.curvature_radius_at_normal(psi));
  };
  double best = 0.0, best_psi = 0.0;
  for (int i = 0; i < kDirectionGrid; ++i) {
    const double psi = kTwoPi * i / kDirectionGrid;
    const double v = diff(psi);
    if (v > best) {
      best = v;
      best_psi = psi;
    }
  }
  // golden-section polish around the best grid direction
  const double gold = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best_psi - kTwoPi / kDirectionGrid;
  double b = best_psi + kTwoPi / kDirectionGrid;
  double x1 = b - gold * (b - a), x2 = a + gold * (b - a);
  double f1 = diff(x1), f2 = diff(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gold * (b - a);
      f2 = diff(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gold * (b - a);
      f1 = diff(x1);
    }
  }
  const double xb = 0.5 * (a + b), fb = diff(xb);
  PMDistanceResult res;
  res.value = std::max(best, fb);
  res.witness = ArcSet::atom(wrap(fb >= best ? xb : best_psi, kTwoPi));
  return res;
}

std::vector<double> pm_distance_dyadic(const SymmetricDisk& C,
                                       const SymmetricDisk& D, int depth) {
  if (depth < 1) throw Error("pm_distance_dyadic: depth must be >= 1");
  std::vector<double> levels(depth, 0.0);
  double running = 0.0;
  for (int k = 1; k <= depth; ++k) {
    const int cells = 1 << k;
    for (int j = 0; j < cells; ++j) {
      const ArcSet sigma = ArcSet::arc(kTwoPi * j / cells, kTwoPi * (j + 1) / cells);
      const double da =
          std::abs(surface_area_measure(C, sigma) - surface_area_measure(D, sigma));
      running = std::max(running, da / sigma.total_measure());
    }
    levels[k - 1] = running;
  }
  return levels;
}

PMDistanceResult pm_distance_polygon(const ConvexPolygonBody& P,
                                     const ConvexPolygonBody& Q) {
  const auto np = P.edge_normals();
  const auto lp = P.edge_lengths();
  const auto nq = Q.edge_normals();
  const auto lq = Q.edge_lengths();
  auto match = [&](const std::vector<double>& na, const std::vector<double>& la,
                   const std::vector<double>& nb, const std::vector<double>& lb,
                   double& bad_normal) {
    for (std::size_t i = 0; i < na.size(); ++i) {
      bool found = false;
      for (std::size_t j = 0; j < nb.size(); ++j) {
        const double d = wrap(na[i] - nb[j] + kPi, kTwoPi) - kPi;
        if (std::abs(d) <= kAtomTol && std::abs(la[i] - lb[j]) <= kAtomTol) {
          found = true;
          break;
        }
      }
      if (!found) {
        bad_normal = na[i];
        return false;
      }
    }
    return true;
  };
  double bad = 0.0;
  PMDistanceResult res;
  if (!match(np, lp, nq, lq, bad) || !match(nq, lq, np, lp, bad)) {
    res.infinite = true;
    res.witness = ArcSet::atom(bad);
    return res;
  }
  res.value = 0.0;
  res.witness = ArcSet::atom(np.empty() ? 0.0 : np[0]);
  return res;
}

PMDistanceResult pm_distance_spiked(const DiskWithSpikes& D,
                                    const SymmetricDisk& C) {
  (void)C;  // any smooth body has atom-free surface area measure
  PMDistanceResult res;
  res.infinite = true;
  res.witness = ArcSet::atom(D.segment_normal());
  return res;
}

double hausdorff_distance(const std::function<double(double)>& support_a,
                          const std::function<double(double)>& support_b) {
  double best = 0.0;
  for (int i = 0; i < kDirectionGrid; ++i) {
    const double psi = kTwoPi * i / kDirectionGrid;
    best = std::max(best, std::abs(support_a(psi) - support_b(psi)));
  }
  return best;
}

double hausdorff_distance(const SymmetricDisk& A, const SymmetricDisk& B) {
  return hausdorff_distance(
      [&](double psi) { return A.boundary().support(psi); },
      [&](double psi) { return B.boundary().support(psi); });
}

double hausdorff_distance(const DiskWithSpikes& A, const SymmetricDisk& B) {
  return hausdorff_distance([&](double psi) { return A.support(psi); },
                            [&](double psi) { return B.boundary().support(psi); });
}

std::vector<RefinementRow> refinement_demo(int n_max) {
  if (n_max < 2) throw Error("refinement_demo: n_max must be >= 2");
  const SymmetricDisk ball = SymmetricDisk::circle(1.0);
  std::vector<RefinementRow> rows;
  rows.reserve(n_max - 1);
  for (int n = 2; n <= n_max; ++n) {
    DiskWithSpikes dn{1.0, 1.0 + 1.0 / n};
    RefinementRow row;
    row.n = n;
    row.d_hausdorff = hausdorff_distance(dn, ball);
    const PMDistanceResult pm = pm_distance_spiked(dn, ball);
    row.pm_infinite = pm.infinite;
    row.atom_mass = dn.segment_mass();
    row.witness_angle = pm.witness.arcs.front().start;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace spindle
