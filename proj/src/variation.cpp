#include "spindle/variation.hpp"

#include <cmath>

namespace spindle {

namespace {

using LD = long double;

// lift x to the representative nearest to ref modulo period
double lift_near(double x, double ref, double period) {
  return x + period * std::round((ref - x) / period);
}

double sin_denominator(const AngleFrame& f) {
  const double d = std::sin(f.theta_q - f.theta_p);
  if (std::abs(d) < 1e-12)
    throw Error("variation: singular configuration, tangents nearly parallel");
  return d;
}

}  // namespace

STSolution solve_ST(const DiskRef& C, const CPolygon& K, double s, double t) {
  const Vec2 p = K.eval(s).position;
  const Vec2 q = K.eval(t).position;
  if ((q - p).norm() < 1e-14)
    throw Error("solve_ST: coincident endpoints");
  const SpindleArc arc = spindle_arc(C, p, q);
  STSolution sol;
  sol.s = s;
  sol.t = t;
  sol.S = arc.S;
  sol.T = arc.T;
  sol.x = arc.translate;
  return sol;
}

AngleFrame frame_from_data(const DiskRef& C, const Vec2& p, const Vec2& q,
                           double gamma_p, double gamma_q) {
  const BoundaryCurve& c = C->boundary();
  const SpindleArc arc = spindle_arc(C, p, q);

  AngleFrame f;
  f.S = arc.S;
  f.T = arc.T;
  f.x = arc.translate;
  f.chord = (q - p).norm();
  f.kappa_p = c.curvature(arc.S);
  f.kappa_q = c.curvature(arc.T);

  // lift anchors carry a small slack so that the exact-equality cases
  // (gamma = theta when a boundary arc of K lies on a translate of C) do not
  // wrap a -1 ulp perturbation up by 2 pi
  const double kSlack = 1e-9;
  const double turning = c.tangent_angle(arc.T) - c.tangent_angle(arc.S);
  f.gamma_p = wrap(gamma_p, kTwoPi);
  f.theta_p = lift_angle(c.tangent_angle(arc.S), f.gamma_p - kSlack);
  f.theta_q = f.theta_p + turning;
  const Vec2 d = q - p;
  const double alpha_pi =
      lift_angle(std::atan2(d.y(), d.x()), f.theta_p - kSlack);
  f.alpha = alpha_pi - kPi;
  f.gamma_q = lift_angle(gamma_q, f.theta_q - kSlack);

  const bool ordered = f.gamma_p <= f.theta_p + kSlack &&
                       f.theta_p <= alpha_pi + kSlack &&
                       alpha_pi <= f.theta_q + kSlack &&
                       f.theta_q <= f.gamma_q + kSlack &&
                       f.gamma_q <= f.gamma_p + kPi + kSlack;
  if (!ordered)
    throw Error("angle_frame: Remark order violated (K not strictly C-convex "
                "at the endpoints, or arc turning >= pi)");
  return f;
}

AngleFrame angle_frame(const DiskRef& C, const CPolygon& K, double s, double t) {
  if (K.corner_distance(s) < 1e-10 || K.corner_distance(t) < 1e-10)
    throw Error("angle_frame: endpoint at a corner of K");
  const CurvePoint gp = K.eval(s);
  const CurvePoint gq = K.eval(t);
  return frame_from_data(C, gp.position, gq.position, gp.phi, gq.phi);
}

STPartials partials_ST(const AngleFrame& f) {
  const double den = sin_denominator(f);
  STPartials d;
  d.dS_ds = std::sin(f.theta_q - f.gamma_p) / den;
  d.dS_dt = std::sin(f.gamma_q - f.theta_q) / den;
  d.dT_ds = std::sin(f.theta_p - f.gamma_p) / den;
  d.dT_dt = std::sin(f.gamma_q - f.theta_p) / den;
  return d;
}

double mixed_partial_S(const AngleFrame& f) {
  const double den = sin_denominator(f);
  const LD tp = f.theta_p, tq = f.theta_q, gp = f.gamma_p, gq = f.gamma_q;
  const LD num = (LD)f.kappa_p * sinl(gq - tq) * cosl(tq - tp) * sinl(tq - gp) -
                 (LD)f.kappa_q * sinl(tp - gp) * sinl(gq - tp);
  return static_cast<double>(num / ((LD)den * den * den));
}

double mixed_partial_A(const AngleFrame& f) {
  const double den_check = sin_denominator(f);
  (void)den_check;
  const LD tp = f.theta_p, tq = f.theta_q, gp = f.gamma_p, gq = f.gamma_q;
  const LD al = f.alpha;
  const LD den = sinl(tq - tp);
  const LD first = -sinl(gq - tq) * sinl(tp - gp) / den;
  const LD bracket = (LD)f.kappa_p * sinl(al - tq) * sinl(tq - gp) * sinl(gq - tq) +
                     (LD)f.kappa_q * sinl(tp - al) * sinl(tp - gp) * sinl(gq - tp);
  return static_cast<double>(first + (LD)f.chord * bracket / (den * den * den));
}

namespace {

void check_euclidean_domain(double theta, double gamma_p, double gamma_q) {
  if (!(theta > 0.0 && theta < kPi / 2.0))
    throw Error("euclidean_mixed_partial: theta out of (0, pi/2)");
  if (!(gamma_p > theta && gamma_p < kPi - theta))
    throw Error("euclidean_mixed_partial: gamma_p out of (theta, pi - theta)");
  if (!(gamma_q > kPi + theta && gamma_q < gamma_p + kPi))
    throw Error(
        "euclidean_mixed_partial: gamma_q out of (pi + theta, gamma_p + pi)");
}

}  // namespace

double euclidean_mixed_partial(double theta, double gamma_p, double gamma_q) {
  check_euclidean_domain(theta, gamma_p, gamma_q);
  const LD th = theta, gp = gamma_p, gq = gamma_q;
  const LD s2t = sinl(2.0L * th);
  const LD term1 = 2.0L * sinl(th) * sinl(th) *
                   (sinl(gp - th) * sinl(th - gq) - sinl(th + gp) * sinl(gq + th)) /
                   (s2t * s2t * s2t);
  const LD term2 = sinl(th - gq) * sinl(th + gp) / s2t;
  return static_cast<double>(term1 - term2);
}

double euclidean_mixed_partial_rearranged(double theta, double gamma_p,
                                          double gamma_q) {
  check_euclidean_domain(theta, gamma_p, gamma_q);
  const LD th = theta, gp = gamma_p, gq = gamma_q;
  const LD ct = cosl(th);
  const LD num = -sinl(th) * sinl(th) * cosl(gp + gq) - cosl(gp - gq) +
                 ct * ct * cosl(2.0L * th + gp - gq);
  return static_cast<double>(num / (2.0L * ct * ct * sinl(2.0L * th)));
}

AreaDecomposition area_difference_decomposition(const DiskRef& C,
                                                const CPolygon& K, double sbar,
                                                double tbar, double s, double t) {
  const BoundaryCurve& c = C->boundary();
  const double L = c.length();
  const STSolution base = solve_ST(C, K, sbar, tbar);
  STSolution cur = solve_ST(C, K, s, t);
  cur.S = lift_near(cur.S, base.S, L);
  cur.T = lift_near(cur.T, base.T, L);

  const Vec2 pbar = K.eval(sbar).position;
  const Vec2 qbar = K.eval(tbar).position;

  AreaDecomposition out;
  out.A_R = cross2(pbar - qbar, cur.x - base.x);

  // 2 A(R_p) = int_{Sbar}^{S} |x + Theta(u) - pbar, Theta'(u)| du
  //          + int_{s}^{sbar} |Gamma(u) - pbar, Gamma'(u)| du   (eq:ARp)
  auto theta_piece = [&](double a, double b, const Vec2& shift) {
    const double sign = (b >= a) ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    return sign * (c.area_integral(lo, hi) + cross2(shift, c.position(hi) - c.position(lo)));
  };
  auto gamma_piece = [&](double a, double b, const Vec2& shift) {
    // int_a^b |Gamma(u) - anchor, Gamma'(u)| du with shift = -anchor
    const double sign = (b >= a) ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    const Vec2 ga = K.eval(lo).position, gb = K.eval(hi).position;
    return sign * (K.boundary_area_integral(lo, hi) + cross2(shift, gb - ga));
  };

  out.A_Rp = 0.5 * (theta_piece(base.S, cur.S, cur.x - pbar) +
                    gamma_piece(s, sbar, -pbar));
  out.A_Rq = 0.5 * (theta_piece(base.T, cur.T, cur.x - qbar) +
                    gamma_piece(t, tbar, -qbar));
  out.delta_abar = out.A_R - out.A_Rp + out.A_Rq;

  out.direct = region_area(K, C, sbar, tbar) - region_area(K, C, s, t);
  return out;
}

}  // namespace spindle
