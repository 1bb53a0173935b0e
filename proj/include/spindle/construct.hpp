#pragma once

#include <string>
#include <vector>

#include "spindle/boundary_curve.hpp"
#include "spindle/spindle_geom.hpp"

namespace spindle {

/// Parameters of the locally parabolic curvature modification of section 4:
/// kappa(s) = kappa0 - lambda s^2 on [-s0, s0], spline-corrected on
/// [s0, delta] so that tangent and position rejoin the base circle, applied
/// at the apex and the antipodal point.
struct CounterexampleSpec {
  double kappa0 = 1.0;
  double lambda = 5.0;
  double s0 = 0.05;
  double delta = 0.2;
  double eps = 0.05;          // PM budget: sup |kappa - kappa_base| <= eps
  double base_radius = 1.0;   // base disk is the circle of this radius
  bool allow_control = false; // accept lambda <= 9 kappa0^3 / 2
  int samples = 16384;        // profile grid resolution

  void validate() const;
};

/// Builds the modified disk. The three junction constraints (equal integral of
/// kappa, of cos of its antiderivative, and of sin of its antiderivative over
/// [0, delta]) are solved by minimal-norm Gauss-Newton over the interior knot
/// values of a clamped cubic spline on [s0, delta].
SymmetricDisk build_counterexample_disk(const CounterexampleSpec& spec);

/// Residuals of constraints (i)-(iii) for the built profile, for reporting.
struct JunctionResiduals {
  double turning = 0.0;  // (i)
  double pos_x = 0.0;    // (ii)
  double pos_y = 0.0;    // (iii)
};
JunctionResiduals junction_residuals(const CounterexampleSpec& spec);

/// 2 sbar - (kappa0^2/3) sbar^3 + (kappa0 (8 lambda + kappa0^3)/60) sbar^5.
double chord_length_expansion(double kappa0, double lambda, double sbar);

/// ||Theta(sbar) - Theta(-sbar)|| from the exact window curvature, evaluated
/// by Gauss-Legendre quadrature in long double: the apex arc is the analytic
/// curve with kappa(u) = kappa0 - lambda u^2, so this is the accurate chord
/// of the built disk for sbar <= s0.
double window_chord(double kappa0, double lambda, double sbar);

/// |window_chord - chord_length_expansion| with both sides evaluated in long
/// double: at sbar ~ 1e-3 the budget 10 sbar^7 = 1e-20 sits below one ulp of
/// the chord in double precision.
double chord_expansion_error(double kappa0, double lambda, double sbar);

/// 4 kappa0 (9 kappa0^3 - 2 lambda) / 3: the quartic-scaling reference
/// coefficient. Its sign decides violation vs control.
double asymptotic_coefficient(double kappa0, double lambda);

/// (9 kappa0^3 - 2 lambda) / (6 kappa0^2): the observed limit of
/// (d_s d_t A) / sbar on the section-4 frame. Same sign threshold
/// lambda = 9 kappa0^3 / 2 as the quartic reference coefficient.
double mixed_partial_leading_coefficient(double kappa0, double lambda);

struct ViolationPoint {
  double sbar = 0.0;
  double analytic = 0.0;      // mixed_partial_A on the section-4 frame
  double ratio = 0.0;         // analytic / sbar^4
  double ratio_linear = 0.0;  // analytic / sbar
  bool frame_ok = false;
  std::string error;
};

struct QuadrangleWitness {
  bool attempted = false;
  bool violated = false;        // lhs < rhs at the base resolution
  bool stable = false;          // margins at the two resolutions within 5%
  double sbar = 0.0, eta = 0.0;
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;  // on bd(K), base resolution
  double lhs = 0.0, rhs = 0.0, margin = 0.0;       // margin = rhs - lhs
  double lhs_fine = 0.0, rhs_fine = 0.0, margin_fine = 0.0;
  std::string error;
};

struct ViolationReport {
  double predicted = 0.0;  // asymptotic_coefficient
  std::vector<ViolationPoint> points;
  QuadrangleWitness witness;
};

/// Evaluates the section-4 predictions on the built disk: the analytic mixed
/// partial on the frame at p = Theta(-sbar), q = Theta(sbar), the ratio
/// against the predicted sbar^4 coefficient, and (for violation specs) an
/// explicit quadrangle violation on a C-2-gon K with the prescribed tangents,
/// certified by region_area at the spec resolution and at twice the spec
/// resolution.
ViolationReport verify_violation(const SymmetricDisk& disk,
                                 const CounterexampleSpec& spec,
                                 const std::vector<double>& sbar_grid);

}  // namespace spindle
