#pragma once

#include "spindle/spindle_geom.hpp"

namespace spindle {

/// Solution of Theta(T) - Theta(S) = Gamma(t) - Gamma(s) for the
/// counterclockwise arc of turning < pi, with x + Theta(S) = Gamma(s).
struct STSolution {
  double s = 0.0, t = 0.0;
  double S = 0.0, T = 0.0;
  Vec2 x = Vec2::Zero();
};

/// Angle/curvature bundle of Remark rem:order. All angles are continuous
/// lifts anchored at gamma_p, so the cyclic order reads
/// gamma_p < theta_p < alpha + pi < theta_q < gamma_q < gamma_p + pi.
struct AngleFrame {
  double S = 0.0, T = 0.0;
  Vec2 x = Vec2::Zero();
  double alpha = 0.0;
  double theta_p = 0.0, theta_q = 0.0;
  double gamma_p = 0.0, gamma_q = 0.0;
  double kappa_p = 0.0, kappa_q = 0.0;
  double chord = 0.0;
};

STSolution solve_ST(const DiskRef& C, const CPolygon& K, double s, double t);

AngleFrame angle_frame(const DiskRef& C, const CPolygon& K, double s, double t);

/// Frame from raw boundary data: p, q with the tangent angles of bd(K) there.
/// Used by the counterexample windows where the K data is analytic.
AngleFrame frame_from_data(const DiskRef& C, const Vec2& p, const Vec2& q,
                           double gamma_p, double gamma_q);

struct STPartials {
  double dS_ds = 0.0, dS_dt = 0.0, dT_ds = 0.0, dT_dt = 0.0;
};

/// First partials of S(s,t), T(s,t) (Lemma lem:partials).
STPartials partials_ST(const AngleFrame& f);

/// Mixed partial of S(s,t) (Lemma lem:partials).
double mixed_partial_S(const AngleFrame& f);

/// Mixed partial of Abar(s,t) = area(K) - area(r_K(Gamma(s),Gamma(t))) via
/// eq:genform. Nonnegative for all admissible frames when C is a circle.
double mixed_partial_A(const AngleFrame& f);

/// Euclidean specialization eq:genform2 (unit circle, theta_p = pi - theta,
/// theta_q = pi + theta, alpha = 0, chord * kappa = 2 sin theta).
double euclidean_mixed_partial(double theta, double gamma_p, double gamma_q);

/// Same quantity through the eq:genform4 rearrangement.
double euclidean_mixed_partial_rearranged(double theta, double gamma_p,
                                          double gamma_q);

struct AreaDecomposition {
  double delta_abar = 0.0;  // A(R) - A(R_p) + A(R_q), eq:areadiff
  double A_R = 0.0, A_Rp = 0.0, A_Rq = 0.0;
  double direct = 0.0;  // Abar(s,t) - Abar(sbar,tbar) via region_area
};

/// Swept-region decomposition of the Abar increment (eq:areadiff) evaluated
/// against the direct region_area difference.
AreaDecomposition area_difference_decomposition(const DiskRef& C,
                                                const CPolygon& K, double sbar,
                                                double tbar, double s, double t);

}  // namespace spindle
