#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "spindle/boundary_curve.hpp"
#include "spindle/types.hpp"

namespace spindle {

using DiskRef = std::shared_ptr<const SymmetricDisk>;

inline DiskRef make_disk_ref(SymmetricDisk d) {
  return std::make_shared<const SymmetricDisk>(std::move(d));
}

/// Arc of a translate of the generator disk C: the boundary piece
/// x + Theta([S, T]) with S <= T on the lift and T - S <= perim(C).
struct SpindleArc {
  double S = 0.0;
  double T = 0.0;
  Vec2 translate = Vec2::Zero();
};

/// Intersection of finitely many translates of C: cyclic vertices joined by
/// counterclockwise arcs of translated copies of C. Also used as the general
/// piecewise-smooth C-convex body (a full disk is a single closed arc with no
/// vertices). Immutable after construction.
class CPolygon {
 public:
  CPolygon(DiskRef generator, std::vector<Vec2> vertices,
           std::vector<SpindleArc> arcs);

  static CPolygon point(DiskRef generator, const Vec2& p);
  static CPolygon full_disk(DiskRef generator, const Vec2& offset = Vec2::Zero());

  const SymmetricDisk& generator() const { return *gen_; }
  DiskRef generator_ref() const { return gen_; }

  bool is_point() const { return arcs_.empty(); }
  const Vec2& point_value() const { return point_; }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<SpindleArc>& arcs() const { return arcs_; }

  double perimeter() const { return perimeter_; }
  /// Global arclength at the start of arc i.
  double arc_start(int i) const { return starts_[i]; }
  double arc_end(int i) const { return starts_[i] + arcs_[i].T - arcs_[i].S; }

  /// Arc index and generator parameter at global arclength sigma.
  std::pair<int, double> locate(double sigma) const;

  /// Boundary point at global arclength sigma; phi is the tangent lift of the
  /// arc containing sigma (right-continuous at corners).
  CurvePoint eval(double sigma) const;

  /// Tangent-direction increase along the counterclockwise boundary arc from
  /// sigma1 to sigma2, including exterior angles at crossed corners.
  double turning(double sigma1, double sigma2) const;

  double area() const;

  /// Integral of det(Gamma, Gamma') over the counterclockwise boundary arc
  /// from sigma1 to sigma2 (sigma2 lifted above sigma1).
  double boundary_area_integral(double sigma1, double sigma2) const;

  /// Membership in the intersection of the arcs' translates.
  bool contains(const Vec2& p, double tol = 1e-9) const;

  /// Distance from sigma to the nearest corner along the boundary.
  double corner_distance(double sigma) const;

  void write_text(std::ostream& out) const;

 private:
  DiskRef gen_;
  std::vector<Vec2> vertices_;
  std::vector<SpindleArc> arcs_;
  std::vector<double> starts_;
  double perimeter_ = 0.0;
  Vec2 point_ = Vec2::Zero();
};

enum class SpindleKind { Spindle, Point, WholePlane };

struct SpindleResult {
  SpindleKind kind = SpindleKind::WholePlane;
  std::optional<CPolygon> polygon;  // set unless WholePlane
};

/// C-spindle of p and q: the intersection of all translates of C containing
/// both. Returns WholePlane when no translate covers the pair.
SpindleResult spindle(const DiskRef& C, const Vec2& p, const Vec2& q);

/// The counterclockwise C-arc from p to q bounding [p,q]_C, together with the
/// translate solving Theta(T) - Theta(S) = q - p.
SpindleArc spindle_arc(const DiskRef& C, const Vec2& p, const Vec2& q);

struct HullResult {
  bool whole_plane = false;
  std::optional<CPolygon> polygon;
};

/// C-hull: intersection of all translates of C containing the points.
HullResult c_hull(const DiskRef& C, const std::vector<Vec2>& points);

/// Intersection of the translates offsets[i] + C; nullopt when empty.
std::optional<CPolygon> intersect_translates(const DiskRef& C,
                                             const std::vector<Vec2>& offsets);

double area(const CPolygon& poly);

/// Area of the region r_K(p, q) between the counterclockwise boundary arc of K
/// from sigma1 to sigma2 and the counterclockwise C-arc of the spindle of its
/// endpoints.
double region_area(const CPolygon& K, const DiskRef& C, double sigma1,
                   double sigma2);

struct ConvexityReport {
  bool c_convex = false;
  double max_violation = 0.0;  // max over boundary of kappa_C - kappa_K
};

/// K is C-convex iff at every boundary point the curvature of K is at least
/// the curvature of C at the point with the same outer normal.
ConvexityReport is_c_convex(const CPolygon& K, const DiskRef& C,
                            double tol = 1e-8);
ConvexityReport is_c_convex(const BoundaryCurve& K, const DiskRef& C,
                            double tol = 1e-8);

/// Convenience bodies used across experiments and tests.
CPolygon make_lens(const DiskRef& C, double center_offset = -1.0);
CPolygon make_triangle_body(const DiskRef& C, double side);

}  // namespace spindle
