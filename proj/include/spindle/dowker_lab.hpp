#pragma once

#include <map>
#include <vector>

#include "spindle/spindle_geom.hpp"

namespace spindle {

struct InscribedResult {
  double area = 0.0;
  std::vector<double> sigmas;   // boundary parameters of the vertices
  std::vector<Vec2> vertices;
  int grid = 0;
  int refine_sweeps = 0;
};

/// Maximum-area inscribed C-n-gon with vertices on bd(K): cyclic DP over an
/// M-point arclength grid followed by per-vertex golden-section refinement.
InscribedResult max_inscribed_area(const CPolygon& K, const DiskRef& C, int n,
                                   int M);
InscribedResult max_inscribed_area(const BoundaryCurve& K, const DiskRef& C,
                                   int n, int M);

/// Grid-restricted optimum without refinement (brute-force comparable).
InscribedResult max_inscribed_area_grid(const CPolygon& K, const DiskRef& C,
                                        int n, int M);

/// Area of the C-n-gon with the given vertices (chord polygon plus caps).
double c_ngon_area(const DiskRef& C, const std::vector<Vec2>& vertices);

struct DowkerEntry {
  double area = 0.0;
  std::vector<double> sigmas;
  int grid = 0;
  int refine_sweeps = 0;
};

struct DowkerReport {
  std::map<int, DowkerEntry> entries;             // n -> a_n data
  std::map<int, double> second_differences;       // n -> a_{n-1}+a_{n+1}-2a_n
};

DowkerReport dowker_report(const CPolygon& K, const DiskRef& C, int n_min,
                           int n_max, int M);

struct QuadrangleCase {
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  double lhs = 0.0;   // r(s1,s4) + r(s2,s3)
  double rhs = 0.0;   // r(s1,s3) + r(s2,s4)
  double turning = 0.0;
  bool holds = false;
};

/// Definition of the Quadrangle Property for one counterclockwise quadruple.
QuadrangleCase quadrangle_check(const CPolygon& K, const DiskRef& C, double s1,
                                double s2, double s3, double s4);

/// Deterministic pseudo-random sweep over admissible quadruples (spans drawn
/// log-uniformly to reach small windows); returns the violating cases.
std::vector<QuadrangleCase> quadrangle_sweep(const CPolygon& K, const DiskRef& C,
                                             int samples, std::uint64_t seed);

}  // namespace spindle
