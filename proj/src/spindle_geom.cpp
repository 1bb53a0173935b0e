#include "spindle/spindle_geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace spindle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ChordRoot {
  double S = 0.0, T = 0.0;  // T = S + span, span in (0, L)
  Vec2 translate = Vec2::Zero();
};

// Newton polish of Theta(T) - Theta(S) = d on the generator curve.
bool polish_root(const BoundaryCurve& c, const Vec2& d, double& S, double& T) {
  for (int it = 0; it < 50; ++it) {
    const CurvePoint a = c.eval(S), b = c.eval(T);
    const Vec2 f = b.position - a.position - d;
    if (f.norm() < 1e-13 * std::max(1.0, d.norm())) return true;
    const Vec2 ta(std::cos(a.phi), std::sin(a.phi));
    const Vec2 tb(std::cos(b.phi), std::sin(b.phi));
    const double det = cross2(-ta, tb);
    if (std::abs(det) < 1e-14) return false;
    // solve [-ta tb] [dS dT]^T = -f by Cramer
    double dS = (-f.x() * tb.y() + f.y() * tb.x()) / det;
    double dT = (ta.x() * f.y() - ta.y() * f.x()) / det;
    const double cap = 0.25 * c.length();
    dS = std::clamp(dS, -cap, cap);
    dT = std::clamp(dT, -cap, cap);
    S += dS;
    T += dT;
  }
  const Vec2 f = c.eval(T).position - c.eval(S).position - d;
  return f.norm() < 1e-11 * std::max(1.0, d.norm());
}

// Both solutions of Theta(T) - Theta(S) = q - p; by o-symmetry the second is
// the central reflection of the first, so only one root is solved for.
std::vector<ChordRoot> chord_roots(const SymmetricDisk& C, const Vec2& p,
                                   const Vec2& q) {
  const BoundaryCurve& c = C.boundary();
  const double L = c.length();
  const Vec2 d = q - p;
  double S = 0.0, T = 0.0;
  bool seeded = false;
  if (C.is_circle()) {
    const double r = C.circle_radius();
    const double half = 0.5 * d.norm();
    if (half < r) {
      const double h = std::sqrt(r * r - half * half);
      const Vec2 dir = d.normalized();
      const Vec2 center = 0.5 * (p + q) + h * Vec2(-dir.y(), dir.x());
      // curve position angle beta(s) = pi/2 + s/r
      auto param = [&](const Vec2& v) {
        return wrap(r * (std::atan2(v.y(), v.x()) - kPi / 2.0), L);
      };
      S = param(p - center);
      T = S + wrap(param(q - center) - S, L);
      seeded = true;
    }
  }
  if (!seeded) {
    // scan g(S) = gauge(Theta(S) + d) - 1 for sign changes
    for (int m = 512; m <= 32768 && !seeded; m *= 8) {
      std::vector<double> g(m);
      for (int i = 0; i < m; ++i)
        g[i] = c.gauge(c.position(L * i / m) + d) - 1.0;
      std::vector<double> roots;
      for (int i = 0; i < m; ++i) {
        const double ga = g[i], gb = g[(i + 1) % m];
        if ((ga <= 0.0) == (gb <= 0.0)) continue;
        double a = L * i / m, b = L * (i + 1) / m, fa = ga;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (a + b);
          const double fm = c.gauge(c.position(mid) + d) - 1.0;
          if ((fa <= 0.0) == (fm <= 0.0)) {
            a = mid;
            fa = fm;
          } else {
            b = mid;
          }
        }
        roots.push_back(0.5 * (a + b));
      }
      if (roots.size() >= 2) {
        // keep the root whose arc to its partner has the smaller span; the
        // partner is recovered by symmetry below, so any root works
        S = roots[0];
        const Vec2 end = c.position(S) + d;
        T = S + wrap(c.param_at_position_angle(std::atan2(end.y(), end.x())) - S, L);
        seeded = true;
      }
    }
    if (!seeded) throw Error("spindle: no covering translate found for chord");
  }
  if (!polish_root(c, d, S, T))
    throw Error("spindle: chord solve did not converge");
  ChordRoot r1;
  r1.S = wrap(S, L);
  r1.T = r1.S + wrap(T - S, L);
  r1.translate = p - c.position(r1.S);
  // central reflection through the chord midpoint
  ChordRoot r2;
  r2.S = wrap(r1.T + L / 2.0, L);
  r2.T = r2.S + (L - (r1.T - r1.S));
  r2.translate = p + q - r1.translate;
  return {r1, r2};
}

}  // namespace

CPolygon::CPolygon(DiskRef generator, std::vector<Vec2> vertices,
                   std::vector<SpindleArc> arcs)
    : gen_(std::move(generator)),
      vertices_(std::move(vertices)),
      arcs_(std::move(arcs)) {
  if (!gen_) throw Error("CPolygon: null generator");
  starts_.resize(arcs_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    if (arcs_[i].T < arcs_[i].S) throw Error("CPolygon: arc with T < S");
    starts_[i] = acc;
    acc += arcs_[i].T - arcs_[i].S;
  }
  perimeter_ = acc;
}

CPolygon CPolygon::point(DiskRef generator, const Vec2& p) {
  CPolygon poly(std::move(generator), {}, {});
  poly.point_ = p;
  return poly;
}

CPolygon CPolygon::full_disk(DiskRef generator, const Vec2& offset) {
  const double L = generator->length();
  SpindleArc arc;
  arc.S = 0.0;
  arc.T = L;
  arc.translate = offset;
  return CPolygon(std::move(generator), {}, {arc});
}

std::pair<int, double> CPolygon::locate(double sigma) const {
  if (is_point()) throw Error("CPolygon: locate on degenerate point");
  const double s = wrap(sigma, perimeter_);
  int lo = 0, hi = static_cast<int>(arcs_.size());
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (starts_[mid] <= s)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, arcs_[lo].S + (s - starts_[lo])};
}

CurvePoint CPolygon::eval(double sigma) const {
  auto [i, S] = locate(sigma);
  CurvePoint p = gen_->boundary().eval(S);
  p.position += arcs_[i].translate;
  return p;
}

double CPolygon::turning(double sigma1, double sigma2) const {
  const BoundaryCurve& c = gen_->boundary();
  const double diff = sigma2 - sigma1;
  const double span = (diff > 0.0 && std::abs(diff - perimeter_) < 1e-12 * (1.0 + perimeter_))
                          ? perimeter_
                          : wrap(diff, perimeter_);
  if (span == 0.0) return 0.0;
  auto [i, Sa] = locate(sigma1);
  auto [j, Sb] = locate(sigma1 + span);
  if (i == j && Sb >= Sa && std::abs((Sb - Sa) - span) < 1e-9 * (1.0 + perimeter_))
    return c.tangent_angle(Sb) - c.tangent_angle(Sa);
  auto corner = [&](int before, int after) {
    double ext = wrap(c.tangent_angle(arcs_[after].S) - c.tangent_angle(arcs_[before].T),
                      kTwoPi);
    if (ext > kTwoPi - 1e-6) ext = 0.0;  // smooth join up to roundoff
    return ext;
  };
  const int n = static_cast<int>(arcs_.size());
  double t = c.tangent_angle(arcs_[i].T) - c.tangent_angle(Sa);
  int k = i;
  for (int steps = 0; steps < n + 1; ++steps) {
    const int next = (k + 1) % n;
    t += corner(k, next);
    if (next == j) return t + c.tangent_angle(Sb) - c.tangent_angle(arcs_[next].S);
    t += c.tangent_angle(arcs_[next].T) - c.tangent_angle(arcs_[next].S);
    k = next;
  }
  throw Error("CPolygon: turning walk failed");
}

double CPolygon::area() const {
  if (is_point()) return 0.0;
  const BoundaryCurve& c = gen_->boundary();
  double twice = 0.0;
  for (const SpindleArc& a : arcs_) {
    const Vec2 d = c.position(a.T) - c.position(a.S);
    twice += c.area_integral(a.S, a.T) + cross2(a.translate, d);
  }
  return 0.5 * twice;
}

double CPolygon::boundary_area_integral(double sigma1, double sigma2) const {
  const BoundaryCurve& c = gen_->boundary();
  const double diff = sigma2 - sigma1;
  const double span = (diff > 0.0 && std::abs(diff - perimeter_) < 1e-12 * (1.0 + perimeter_))
                          ? perimeter_
                          : wrap(diff, perimeter_);
  if (span == 0.0) return 0.0;
  auto piece = [&](int idx, double Sa, double Sb) {
    const Vec2 d = c.position(Sb) - c.position(Sa);
    return c.area_integral(Sa, Sb) + cross2(arcs_[idx].translate, d);
  };
  auto [i, Sa] = locate(sigma1);
  auto [j, Sb] = locate(sigma1 + span);
  if (i == j && Sb >= Sa && std::abs((Sb - Sa) - span) < 1e-9 * (1.0 + perimeter_))
    return piece(i, Sa, Sb);
  const int n = static_cast<int>(arcs_.size());
  double total = piece(i, Sa, arcs_[i].T);
  int k = i;
  for (int steps = 0; steps < n + 1; ++steps) {
    const int next = (k + 1) % n;
    if (next == j) return total + piece(next, arcs_[next].S, Sb);
    total += piece(next, arcs_[next].S, arcs_[next].T);
    k = next;
  }
  throw Error("CPolygon: boundary integral walk failed");
}

bool CPolygon::contains(const Vec2& p, double tol) const {
  if (is_point()) return (p - point_).norm() <= tol;
  const BoundaryCurve& c = gen_->boundary();
  for (const SpindleArc& a : arcs_)
    if (c.gauge(p - a.translate) > 1.0 + tol) return false;
  return true;
}

double CPolygon::corner_distance(double sigma) const {
  if (vertices_.empty()) return 0.5 * perimeter_;
  const double s = wrap(sigma, perimeter_);
  double best = kInf;
  for (double v : starts_) {
    const double d = wrap(s - v, perimeter_);
    best = std::min(best, std::min(d, perimeter_ - d));
  }
  return best;
}

void CPolygon::write_text(std::ostream& out) const {
  out << "cpolygon " << vertices_.size() << " " << arcs_.size() << "\n";
  for (const Vec2& v : vertices_) out << "vertex " << v.x() << " " << v.y() << "\n";
  for (const SpindleArc& a : arcs_)
    out << "arc " << a.translate.x() << " " << a.translate.y() << " " << a.S << " "
        << a.T << "\n";
}

SpindleArc spindle_arc(const DiskRef& C, const Vec2& p, const Vec2& q) {
  const BoundaryCurve& c = C->boundary();
  if (c.gauge(0.5 * (q - p)) > 1.0)
    throw Error("spindle_arc: chord longer than the width of C");
  auto roots = chord_roots(*C, p, q);
  const ChordRoot& r = (roots[0].T - roots[0].S <= roots[1].T - roots[1].S)
                           ? roots[0]
                           : roots[1];
  SpindleArc arc;
  arc.S = r.S;
  arc.T = r.T;
  arc.translate = r.translate;
  return arc;
}

SpindleResult spindle(const DiskRef& C, const Vec2& p, const Vec2& q) {
  SpindleResult res;
  const BoundaryCurve& c = C->boundary();
  const double L = c.length();
  if ((q - p).norm() <= 1e-14 * L) {
    res.kind = SpindleKind::Point;
    res.polygon = CPolygon::point(C, p);
    return res;
  }
  const double g = c.gauge(0.5 * (q - p));
  if (g > 1.0 + 1e-9) {
    res.kind = SpindleKind::WholePlane;
    return res;
  }
  if (g > 1.0 - 1e-9) {
    // unique covering translate: the spindle is a full translate of C
    res.kind = SpindleKind::Spindle;
    res.polygon = CPolygon::full_disk(C, 0.5 * (p + q));
    return res;
  }
  const SpindleArc lower = spindle_arc(C, p, q);
  SpindleArc upper;  // central reflection of the lower arc, runs q -> p
  upper.S = wrap(lower.S + L / 2.0, L);
  upper.T = upper.S + (lower.T - lower.S);
  upper.translate = p + q - lower.translate;
  res.kind = SpindleKind::Spindle;
  res.polygon = CPolygon(C, {p, q}, {lower, upper});
  return res;
}

std::optional<CPolygon> intersect_translates(const DiskRef& C,
                                             const std::vector<Vec2>& offsets_in) {
  const BoundaryCurve& c = C->boundary();
  std::vector<Vec2> offsets;
  for (const Vec2& x : offsets_in) {
    bool dup = false;
    for (const Vec2& y : offsets)
      if ((x - y).norm() < 1e-12) dup = true;
    if (!dup) offsets.push_back(x);
  }
  const int k = static_cast<int>(offsets.size());
  if (k == 0) throw Error("intersect_translates: no translates");
  if (k == 1) return CPolygon::full_disk(C, offsets[0]);

  const int m = 4096;
  std::vector<int> active(m);
  std::vector<double> support_c(m);
  for (int a = 0; a < m; ++a) {
    const double psi = kTwoPi * a / m;
    const Vec2 u(std::cos(psi), std::sin(psi));
    support_c[a] = c.support(psi);
    int best = 0;
    double best_h = offsets[0].dot(u);
    for (int i = 1; i < k; ++i) {
      const double h = offsets[i].dot(u);
      if (h < best_h) {
        best_h = h;
        best = i;
      }
    }
    active[a] = best;
  }
  // emptiness: the min-support function must have nonnegative width
  for (int a = 0; a < m / 2; ++a) {
    const double psi = kTwoPi * a / m;
    const Vec2 u(std::cos(psi), std::sin(psi));
    double lo = kInf, hi = kInf;
    for (int i = 0; i < k; ++i) {
      lo = std::min(lo, offsets[i].dot(u));
      hi = std::min(hi, offsets[i].dot(-u));
    }
    if (lo + support_c[a] + hi + support_c[(a + m / 2) % m] < 1e-12) return std::nullopt;
  }

  // compress runs of the active translate around the normal circle
  std::vector<std::pair<int, int>> runs;  // (start sample, translate index)
  for (int a = 0; a < m; ++a)
    if (runs.empty() || runs.back().second != active[a]) runs.push_back({a, active[a]});
  if (runs.size() >= 2 && runs.front().second == runs.back().second) {
    runs.front().first = runs.back().first - m;
    runs.pop_back();
  }
  if (runs.size() == 1) return CPolygon::full_disk(C, offsets[runs[0].second]);

  const int nr = static_cast<int>(runs.size());
  std::vector<Vec2> verts(nr);
  std::vector<double> entry(nr), exit(nr);
  for (int r = 0; r < nr; ++r) {
    const int i = runs[r].second;
    const int j = runs[(r + 1) % nr].second;
    const int a_end = (r + 1 < nr ? runs[r + 1].first : runs[0].first + m) - 1;
    const double psi_a = kTwoPi * a_end / m;
    // vertex: walk the boundary of translate i across the gauge level set of
    // translate j, bracketing g(A) = gauge(x_i + Theta(A) - x_j) - 1
    const double L = c.length();
    auto g = [&](double A) { return c.gauge(offsets[i] + c.position(A) - offsets[j]) - 1.0; };
    double A_lo = c.param_at_normal(psi_a);
    double A_hi = A_lo;
    const double h = L / m;
    bool ok = false;
    if (g(A_lo) <= 0.0) {
      for (int it = 1; it <= 4 * m && !ok; ++it) {
        A_hi = A_lo + it * h;
        if (g(A_hi) > 0.0) {
          A_lo = A_hi - h;
          ok = true;
        }
      }
    } else {
      for (int it = 1; it <= 4 * m && !ok; ++it) {
        const double cand = A_hi - it * h;
        if (g(cand) <= 0.0) {
          A_lo = cand;
          A_hi = cand + h;
          ok = true;
        }
      }
    }
    if (!ok) return std::nullopt;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (A_lo + A_hi);
      if (g(mid) <= 0.0)
        A_lo = mid;
      else
        A_hi = mid;
    }
    const double A = 0.5 * (A_lo + A_hi);
    const Vec2 v = offsets[i] + c.position(A);
    const Vec2 rel = v - offsets[j];
    const double B = c.param_at_position_angle(std::atan2(rel.y(), rel.x()));
    verts[r] = v;
    exit[r] = wrap(A, L);
    entry[(r + 1) % nr] = wrap(B, L);
  }
  std::vector<Vec2> vertices(nr);
  std::vector<SpindleArc> arcs(nr);
  for (int r = 0; r < nr; ++r) {
    vertices[r] = verts[(r + nr - 1) % nr];  // vertex at the start of run r
    SpindleArc a;
    a.S = entry[r];
    a.T = a.S + wrap(exit[r] - entry[r], c.length());
    a.translate = offsets[runs[r].second];
    arcs[r] = a;
  }
  CPolygon poly(C, vertices, arcs);
  if (poly.area() <= 0.0) return std::nullopt;
  return poly;
}

HullResult c_hull(const DiskRef& C, const std::vector<Vec2>& points_in) {
  if (points_in.empty()) throw Error("c_hull: empty point set");
  std::vector<Vec2> points;
  for (const Vec2& p : points_in) {
    bool dup = false;
    for (const Vec2& q : points)
      if ((p - q).norm() < 1e-13) dup = true;
    if (!dup) points.push_back(p);
  }
  HullResult res;
  if (points.size() == 1) {
    res.polygon = CPolygon::point(C, points[0]);
    return res;
  }
  if (points.size() == 2) {
    SpindleResult s = spindle(C, points[0], points[1]);
    if (s.kind == SpindleKind::WholePlane) {
      res.whole_plane = true;
      return res;
    }
    res.polygon = std::move(s.polygon);
    return res;
  }
  // dual trick: D = intersection of translates centered at the points; the
  // hull is the intersection of translates centered at the vertices of D
  std::optional<CPolygon> dual = intersect_translates(C, points);
  if (!dual) {
    res.whole_plane = true;
    return res;
  }
  if (dual->vertices().empty())
    throw Error("c_hull: degenerate dual body");
  res.polygon = intersect_translates(C, dual->vertices());
  if (!res.polygon) throw Error("c_hull: inconsistent dual construction");
  return res;
}

double area(const CPolygon& poly) { return poly.area(); }

double region_area(const CPolygon& K, const DiskRef& C, double sigma1,
                   double sigma2) {
  const double span = wrap(sigma2 - sigma1, K.perimeter());
  if (span == 0.0) return 0.0;
  const Vec2 p = K.eval(sigma1).position;
  const Vec2 q = K.eval(sigma1 + span).position;
  if ((q - p).norm() < 1e-15) return 0.0;
  const SpindleArc arc = spindle_arc(C, p, q);
  const BoundaryCurve& c = C->boundary();
  const double arc_int = c.area_integral(arc.S, arc.T) +
                         cross2(arc.translate, c.position(arc.T) - c.position(arc.S));
  return 0.5 * (K.boundary_area_integral(sigma1, sigma1 + span) - arc_int);
}

namespace {

ConvexityReport convexity_from_samples(
    const std::vector<std::pair<double, double>>& kappa_and_normal,
    const DiskRef& C, double tol) {
  const BoundaryCurve& cc = C->boundary();
  ConvexityReport rep;
  rep.max_violation = -kInf;
  for (auto [kappa_k, psi] : kappa_and_normal) {
    const double kappa_c = cc.curvature(cc.param_at_normal(psi));
    rep.max_violation = std::max(rep.max_violation, kappa_c - kappa_k);
  }
  rep.c_convex = rep.max_violation <= tol;
  rep.max_violation = std::max(rep.max_violation, 0.0);
  return rep;
}

}  // namespace

ConvexityReport is_c_convex(const CPolygon& K, const DiskRef& C, double tol) {
  if (K.is_point()) return {true, 0.0};
  const BoundaryCurve& kc = K.generator().boundary();
  std::vector<std::pair<double, double>> samples;
  for (const SpindleArc& a : K.arcs()) {
    const int m = 64;
    for (int i = 1; i < m; ++i) {
      const double S = a.S + (a.T - a.S) * i / m;
      const CurvePoint p = kc.eval(S);
      samples.push_back({p.kappa, p.phi - kPi / 2.0});
    }
  }
  return convexity_from_samples(samples, C, tol);
}

ConvexityReport is_c_convex(const BoundaryCurve& K, const DiskRef& C, double tol) {
  std::vector<std::pair<double, double>> samples;
  const int m = 256;
  for (int i = 0; i < m; ++i) {
    const CurvePoint p = K.eval(K.length() * i / m);
    samples.push_back({p.kappa, p.phi - kPi / 2.0});
  }
  return convexity_from_samples(samples, C, tol);
}

CPolygon make_lens(const DiskRef& C, double center_offset) {
  double h = center_offset;
  if (h < 0.0) h = std::sqrt(3.0) / 2.0 * C->boundary().support(kPi / 2.0);
  auto poly = intersect_translates(C, {Vec2(0.0, h), Vec2(0.0, -h)});
  if (!poly) throw Error("make_lens: empty intersection");
  return *poly;
}

CPolygon make_triangle_body(const DiskRef& C, double side) {
  const double R = side / std::sqrt(3.0);
  std::vector<Vec2> offs;
  for (int k = 0; k < 3; ++k) {
    const double a = kPi / 2.0 + kTwoPi * k / 3.0;
    offs.push_back(R * Vec2(std::cos(a), std::sin(a)));
  }
  auto poly = intersect_translates(C, offs);
  if (!poly) throw Error("make_triangle_body: empty intersection");
  return *poly;
}

}  // namespace spindle
