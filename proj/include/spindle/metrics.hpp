#pragma once

#include <functional>
#include <vector>

#include "spindle/boundary_curve.hpp"
#include "spindle/types.hpp"

namespace spindle {

/// Closed arc [start, end] of normal directions; start == end is an atom.
struct DirectionArc {
  double start = 0.0;
  double end = 0.0;

  bool is_atom(double tol = 0.0) const { return end - start <= tol; }
  double measure() const { return end - start; }
};

/// Finite union of disjoint closed arcs and atoms on S^1.
struct ArcSet {
  std::vector<DirectionArc> arcs;

  /// Total angular length H(sigma).
  double total_measure() const;

  static ArcSet full_circle();
  static ArcSet atom(double psi);
  static ArcSet arc(double start, double end);

  /// Checks disjointness (mod 2pi) and total measure <= 2pi; throws on failure.
  void validate() const;
};

struct PMDistanceResult {
  bool infinite = false;
  double value = 0.0;       // meaningful when finite
  ArcSet witness;           // maximizing direction, or the certifying atom
};

/// Convex polygon, counterclockwise vertices; participates in the discrete
/// topology of Remark 10.
struct ConvexPolygonBody {
  std::vector<Vec2> vertices;
  bool o_symmetric = false;

  ConvexPolygonBody(std::vector<Vec2> verts, bool symmetric = false);

  /// Edge normal angles in [0, 2pi) and lengths, in boundary order.
  std::vector<double> edge_normals() const;
  std::vector<double> edge_lengths() const;
  double support(double psi) const;

  static ConvexPolygonBody square(double side, double rotation = 0.0,
                                  const Vec2& center = Vec2::Zero());
};

/// conv(rB^2 v {(a,0), (-a,0)}) with a >= r: the D_n bodies of Proposition 8.
struct DiskWithSpikes {
  double radius = 1.0;
  double apex = 1.0;  // distance of the two spike vertices from o

  double support(double psi) const;
  /// Normal angle of the segment from the tangency point to (apex, 0).
  double segment_normal() const;
  /// Length of each of the four flat segments (the atom mass).
  double segment_mass() const;
};

/// Surface area measure A_K(sigma): smooth disks integrate the curvature
/// radius over sigma; polygons sum edge lengths with normals in sigma.
double surface_area_measure(const SymmetricDisk& body, const ArcSet& sigma);
double surface_area_measure(const ConvexPolygonBody& body, const ArcSet& sigma);
double surface_area_measure(const DiskWithSpikes& body, const ArcSet& sigma);

/// Least valid tau of (eq:PM) for smooth bodies: sup_psi |R_C - R_D|.
PMDistanceResult pm_distance_smooth(const SymmetricDisk& C,
                                    const SymmetricDisk& D);

/// Lower bounds from dyadic arcs: entry k is the best |dA|/H(sigma) ratio over
/// all dyadic arcs of refinement level <= k + 1. Nondecreasing in k.
std::vector<double> pm_distance_dyadic(const SymmetricDisk& C,
                                       const SymmetricDisk& D, int depth);

/// Remark 10: 0 iff Q is a translate of P (exact atom match), else Infinite.
PMDistanceResult pm_distance_polygon(const ConvexPolygonBody& P,
                                     const ConvexPolygonBody& Q);

/// Smooth body vs spiked body: always Infinite, witnessed by a segment atom.
PMDistanceResult pm_distance_spiked(const DiskWithSpikes& D,
                                    const SymmetricDisk& C);

/// Support-function Hausdorff distance over a 4096-direction grid (the grid
/// contains angle 0).
double hausdorff_distance(const std::function<double(double)>& support_a,
                          const std::function<double(double)>& support_b);
double hausdorff_distance(const SymmetricDisk& A, const SymmetricDisk& B);
double hausdorff_distance(const DiskWithSpikes& A, const SymmetricDisk& B);

struct RefinementRow {
  int n = 0;
  double d_hausdorff = 0.0;
  bool pm_infinite = false;
  double atom_mass = 0.0;      // mass of the witnessing segment atom
  double witness_angle = 0.0;  // its normal direction
};

/// Proposition 8 demo: D_n = conv(B^2 v {+-(1 + 1/n, 0)}) vs B^2 for
/// n = 2..n_max. d_H -> 0 while the PM result stays Infinite.
std::vector<RefinementRow> refinement_demo(int n_max);

}  // namespace spindle
