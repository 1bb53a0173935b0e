#include "spindle/construct.hpp"

#include <algorithm>
#include <cmath>

#include "spindle/dowker_lab.hpp"
#include "spindle/variation.hpp"

namespace spindle {

namespace {

using LD = long double;

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

/// Clamped cubic spline through uniformly spaced knots on [a, b].
struct ClampedSpline {
  double a = 0.0, h = 0.0;
  std::vector<double> y;
  std::vector<double> m;  // second derivatives at the knots

  ClampedSpline(double lo, double hi, std::vector<double> values,
                double slope_lo, double slope_hi)
      : a(lo), h((hi - lo) / (values.size() - 1)), y(std::move(values)) {
    const int n = static_cast<int>(y.size());
    m.resize(n);
    // tridiagonal system for the clamped second derivatives
    std::vector<double> diag(n), rhs(n), sub(n), sup(n);
    diag[0] = 2.0 * h;
    sup[0] = h;
    rhs[0] = 6.0 * ((y[1] - y[0]) / h - slope_lo);
    for (int k = 1; k < n - 1; ++k) {
      sub[k] = h;
      diag[k] = 4.0 * h;
      sup[k] = h;
      rhs[k] = 6.0 * (y[k + 1] - 2.0 * y[k] + y[k - 1]) / h;
    }
    sub[n - 1] = h;
    diag[n - 1] = 2.0 * h;
    rhs[n - 1] = 6.0 * (slope_hi - (y[n - 1] - y[n - 2]) / h);
    for (int k = 1; k < n; ++k) {
      const double f = sub[k] / diag[k - 1];
      diag[k] -= f * sup[k - 1];
      rhs[k] -= f * rhs[k - 1];
    }
    m[n - 1] = rhs[n - 1] / diag[n - 1];
    for (int k = n - 2; k >= 0; --k)
      m[k] = (rhs[k] - sup[k] * m[k + 1]) / diag[k];
  }

  int segment(double u) const {
    int k = static_cast<int>((u - a) / h);
    return std::clamp(k, 0, static_cast<int>(y.size()) - 2);
  }

  double value(double u) const {
    const int k = segment(u);
    const double tl = a + k * h, tr = tl + h;
    const double dl = tr - u, dr = u - tl;
    return m[k] * dl * dl * dl / (6.0 * h) + m[k + 1] * dr * dr * dr / (6.0 * h) +
           (y[k] - m[k] * h * h / 6.0) * dl / h +
           (y[k + 1] - m[k + 1] * h * h / 6.0) * dr / h;
  }

  /// Integral of the spline over [a, u].
  double integral(double u) const {
    const int k = segment(u);
    double total = 0.0;
    for (int j = 0; j < k; ++j) total += segment_integral(j, a + (j + 1) * h);
    return total + segment_integral(k, u);
  }

 private:
  double segment_integral(int k, double u) const {
    const double tl = a + k * h, tr = tl + h;
    const double dl = tr - u, dr = u - tl;
    return m[k] * (h * h * h * h - dl * dl * dl * dl) / (24.0 * h) +
           m[k + 1] * dr * dr * dr * dr / (24.0 * h) +
           (y[k] - m[k] * h * h / 6.0) * (h * h - dl * dl) / (2.0 * h) +
           (y[k + 1] - m[k + 1] * h * h / 6.0) * dr * dr / (2.0 * h);
  }
};

constexpr int kKnots = 9;  // spline knot count on [s0, delta]

/// One-sided modified curvature on [0, delta]: parabola then spline; even in s.
struct WindowProfile {
  double kappa0, lambda, s0, delta, kappa_base;
  ClampedSpline spline;

  WindowProfile(const CounterexampleSpec& spec, std::vector<double> knot_values)
      : kappa0(spec.kappa0),
        lambda(spec.lambda),
        s0(spec.s0),
        delta(spec.delta),
        kappa_base(1.0 / spec.base_radius),
        spline(spec.s0, spec.delta, std::move(knot_values),
               -2.0 * spec.lambda * spec.s0, 0.0) {}

  double kappa(double u) const {
    u = std::abs(u);
    if (u <= s0) return kappa0 - lambda * u * u;
    if (u < delta) return spline.value(u);
    return kappa_base;
  }

  /// phi(u) = integral of kappa over [0, u] for u in [0, delta].
  double phi(double u) const {
    if (u <= s0) return kappa0 * u - lambda * u * u * u / 3.0;
    return kappa0 * s0 - lambda * s0 * s0 * s0 / 3.0 + spline.integral(u);
  }

  /// Residuals of the junction constraints (i)-(iii) against the base circle.
  JunctionResiduals residuals() const {
    JunctionResiduals r;
    r.turning = phi(delta) - kappa_base * delta;
    double cx = 0.0, cy = 0.0;
    auto accumulate = [&](double lo, double hi) {
      const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      for (int i = 0; i < kGL; ++i) {
        const double u = mid + half * kGLx[i];
        const double ph = phi(u);
        cx += half * kGLw[i] * std::cos(ph);
        cy += half * kGLw[i] * std::sin(ph);
      }
    };
    const int par_pieces = 4;
    for (int p = 0; p < par_pieces; ++p)
      accumulate(s0 * p / par_pieces, s0 * (p + 1) / par_pieces);
    for (int k = 0; k < kKnots - 1; ++k)
      accumulate(s0 + (delta - s0) * k / (kKnots - 1.0),
                 s0 + (delta - s0) * (k + 1) / (kKnots - 1.0));
    r.pos_x = cx - std::sin(kappa_base * delta) / kappa_base;
    r.pos_y = cy - (1.0 - std::cos(kappa_base * delta)) / kappa_base;
    return r;
  }
};

/// Solves the interior knot values from the three constraints (i)-(iii) by
/// minimal-norm Gauss-Newton. The system is underdetermined (kKnots - 2
/// unknowns, three equations); the minimal-norm step keeps the correction
/// close to the base curvature.
std::vector<double> solve_knots(const CounterexampleSpec& spec) {
  const double kb = 1.0 / spec.base_radius;
  const int nf = kKnots - 2;  // free knots: indices 1 .. kKnots - 2
  std::vector<double> knots(kKnots, kb);
  knots.front() = spec.kappa0 - spec.lambda * spec.s0 * spec.s0;
  auto residual = [&](const std::vector<double>& k) {
    WindowProfile wp(spec, k);
    const JunctionResiduals r = wp.residuals();
    return Eigen::Vector3d(r.turning, r.pos_x, r.pos_y);
  };
  Eigen::Vector3d f = residual(knots);
  for (int it = 0; it < 60 && f.norm() > 1e-13; ++it) {
    Eigen::MatrixXd jac(3, nf);
    const double h = 1e-6;
    for (int j = 0; j < nf; ++j) {
      auto kp = knots, km = knots;
      kp[j + 1] += h;
      km[j + 1] -= h;
      jac.col(j) = (residual(kp) - residual(km)) / (2.0 * h);
    }
    const Eigen::Matrix3d gram =
        jac * jac.transpose() + 1e-14 * Eigen::Matrix3d::Identity();
    const Eigen::VectorXd step = jac.transpose() * gram.ldlt().solve(f);
    double damp = 1.0;
    bool accepted = false;
    for (int half = 0; half < 30; ++half) {
      auto trial = knots;
      for (int j = 0; j < nf; ++j) trial[j + 1] -= damp * step[j];
      const Eigen::Vector3d ft = residual(trial);
      if (ft.norm() < f.norm()) {
        knots = trial;
        f = ft;
        accepted = true;
        break;
      }
      damp *= 0.5;
    }
    if (!accepted) break;
  }
  if (f.norm() > 1e-9)
    throw Error("build_counterexample_disk: junction constraint solve did not "
                "converge, residual " + std::to_string(f.norm()));
  return knots;
}

WindowProfile solved_window(const CounterexampleSpec& spec) {
  return WindowProfile(spec, solve_knots(spec));
}

}  // namespace

void CounterexampleSpec::validate() const {
  if (kappa0 <= 0.0) throw Error("CounterexampleSpec: kappa0 must be positive");
  if (lambda < 0.0) throw Error("CounterexampleSpec: lambda must be nonnegative");
  if (!(s0 > 0.0 && s0 < delta))
    throw Error("CounterexampleSpec: need 0 < s0 < delta");
  if (kappa0 - lambda * s0 * s0 <= 0.0)
    throw Error("CounterexampleSpec: curvature not positive inside the window");
  if (base_radius <= 0.0) throw Error("CounterexampleSpec: base_radius <= 0");
  if (delta >= kPi * base_radius / 2.0)
    throw Error("CounterexampleSpec: window overlaps the antipodal window");
  if (!allow_control && lambda <= 4.5 * kappa0 * kappa0 * kappa0)
    throw Error("CounterexampleSpec: lambda <= 9 kappa0^3 / 2 needs the "
                "control flag");
  if (samples < 1024) throw Error("CounterexampleSpec: samples too small");
}

SymmetricDisk build_counterexample_disk(const CounterexampleSpec& spec) {
  spec.validate();
  const double kb = 1.0 / spec.base_radius;
  const WindowProfile wp = solved_window(spec);

  // deviation budget and positivity on a dense window sampling
  double worst = std::abs(spec.kappa0 - kb);
  double kmin = std::min(spec.kappa0, kb);
  for (int i = 0; i <= 4000; ++i) {
    const double u = spec.delta * i / 4000;
    const double k = wp.kappa(u);
    worst = std::max(worst, std::abs(k - kb));
    kmin = std::min(kmin, k);
  }
  if (kmin <= 0.0)
    throw Error("build_counterexample_disk: curvature positivity failed, min " +
                std::to_string(kmin));
  if (worst > spec.eps)
    throw Error("build_counterexample_disk: PM budget exceeded, deviation " +
                std::to_string(worst) + " > eps");

  const double L = kTwoPi * spec.base_radius;
  CurvatureProfile profile;
  profile.length = L;
  profile.kappa.resize(spec.samples);
  for (int i = 0; i < spec.samples; ++i) {
    const double s = L * i / spec.samples;
    const double d0 = std::min(s, L - s);                    // distance to apex
    const double d1 = std::abs(s - L / 2.0);                 // to the antipode
    const double d = std::min(d0, d1);
    profile.kappa[i] = (d <= spec.delta) ? wp.kappa(d) : kb;
  }
  return SymmetricDisk(BoundaryCurve::reconstruct(profile, 1e-8));
}

JunctionResiduals junction_residuals(const CounterexampleSpec& spec) {
  spec.validate();
  return solved_window(spec).residuals();
}

double chord_length_expansion(double kappa0, double lambda, double sbar) {
  return 2.0 * sbar - (kappa0 * kappa0 / 3.0) * sbar * sbar * sbar +
         (kappa0 * (8.0 * lambda + kappa0 * kappa0 * kappa0) / 60.0) * sbar *
             sbar * sbar * sbar * sbar;
}

namespace {

/// Gauss-Legendre nodes and weights computed in long double (Newton on the
/// Legendre recurrence); the double literals above are not accurate enough
/// for the chord-expansion error budget at sbar ~ 1e-3.
struct GLTableLD {
  LD x[kGL];
  LD w[kGL];
};

const GLTableLD& gl_table_ld() {
  static const GLTableLD table = [] {
    GLTableLD t{};
    for (int i = 0; i < kGL; ++i) {
      LD x = cosl((LD)kPi * (i + 0.75L) / (kGL + 0.5L));
      LD dp = 0.0L;
      for (int it = 0; it < 100; ++it) {
        LD p0 = 1.0L, p1 = x;
        for (int k = 2; k <= kGL; ++k) {
          const LD p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = kGL * (x * p1 - p0) / (x * x - 1.0L);
        const LD dx = p1 / dp;
        x -= dx;
        if (fabsl(dx) < 1e-21L) break;
      }
      t.x[i] = x;
      t.w[i] = 2.0L / ((1.0L - x * x) * dp * dp);
    }
    return t;
  }();
  return table;
}

/// chord = 2 int_0^sbar cos(kappa0 u - lambda u^3 / 3) du; the sine part
/// cancels by the evenness of kappa.
LD window_chord_ld(LD kappa0, LD lambda, LD sbar) {
  const GLTableLD& gl = gl_table_ld();
  LD total = 0.0L;
  const LD half = 0.5L * sbar, mid = half;
  for (int i = 0; i < kGL; ++i) {
    const LD u = mid + half * gl.x[i];
    const LD ph = kappa0 * u - lambda * u * u * u / 3.0L;
    total += half * gl.w[i] * cosl(ph);
  }
  return 2.0L * total;
}

}  // namespace

double window_chord(double kappa0, double lambda, double sbar) {
  return static_cast<double>(window_chord_ld(kappa0, lambda, sbar));
}

double chord_expansion_error(double kappa0, double lambda, double sbar) {
  const LD k0 = kappa0, lam = lambda, sb = sbar;
  const LD expansion = 2.0L * sb - (k0 * k0 / 3.0L) * sb * sb * sb +
                       (k0 * (8.0L * lam + k0 * k0 * k0) / 60.0L) * sb * sb *
                           sb * sb * sb;
  return static_cast<double>(fabsl(window_chord_ld(k0, lam, sb) - expansion));
}

double asymptotic_coefficient(double kappa0, double lambda) {
  return 4.0 * kappa0 * (9.0 * kappa0 * kappa0 * kappa0 - 2.0 * lambda) / 3.0;
}

double mixed_partial_leading_coefficient(double kappa0, double lambda) {
  return (9.0 * kappa0 * kappa0 * kappa0 - 2.0 * lambda) /
         (6.0 * kappa0 * kappa0);
}

namespace {

AngleFrame section4_frame(double kappa0, double lambda, double sbar) {
  AngleFrame f;
  const double kbar = kappa0 * sbar - lambda * sbar * sbar * sbar / 3.0;
  f.alpha = 0.0;
  f.theta_p = kPi - kbar;
  f.theta_q = kPi + kbar;
  f.gamma_p = kPi / 2.0 + kappa0 * sbar;
  f.gamma_q = 1.5 * kPi - kappa0 * sbar;
  f.kappa_p = kappa0 - lambda * sbar * sbar;
  f.kappa_q = f.kappa_p;
  f.chord = window_chord(kappa0, lambda, sbar);
  return f;
}

bool frame_ordered(const AngleFrame& f) {
  return f.gamma_p <= f.theta_p && f.theta_p <= f.alpha + kPi &&
         f.alpha + kPi <= f.theta_q && f.theta_q <= f.gamma_q &&
         f.gamma_q <= f.gamma_p + kPi;
}

struct WitnessEval {
  double sigma_p = 0.0, sigma_q = 0.0;
  double lhs = 0.0, rhs = 0.0;
  CPolygon body;
};

/// Boundary parameter of the contact point P (on translate x_t) in K.
double locate_on_translate(const CPolygon& K, const Vec2& x_t, double P,
                           double L) {
  for (std::size_t i = 0; i < K.arcs().size(); ++i) {
    if ((K.arcs()[i].translate - x_t).norm() > 1e-9) continue;
    const double lift = K.arcs()[i].S + wrap(P - K.arcs()[i].S, L);
    if (lift <= K.arcs()[i].T + 1e-9)
      return K.arc_start(static_cast<int>(i)) + (lift - K.arcs()[i].S);
  }
  throw Error("verify_violation: contact point not on the witness body");
}

WitnessEval witness_margin(const SymmetricDisk& disk, double kappa0,
                           double sbar, double eta) {
  const DiskRef C = make_disk_ref(disk);
  const BoundaryCurve& c = disk.boundary();
  const double L = c.length();
  const Vec2 p = c.position(L - sbar);
  const Vec2 q = c.position(sbar);
  const double gp = kPi / 2.0 + kappa0 * sbar;
  const double gq = 1.5 * kPi - kappa0 * sbar;
  const double P = c.param_at_normal(gp - kPi / 2.0);
  const double Q = c.param_at_normal(gq - kPi / 2.0);
  const Vec2 xp = p - c.position(P);
  const Vec2 xq = q - c.position(Q);
  auto K = intersect_translates(C, {xp, xq});
  if (!K) throw Error("verify_violation: witness body is empty");

  WitnessEval ev{0.0, 0.0, 0.0, 0.0, *K};
  ev.sigma_p = locate_on_translate(*K, xp, P, L);
  ev.sigma_q = locate_on_translate(*K, xq, Q, L);
  const double gap = wrap(ev.sigma_q - ev.sigma_p, K->perimeter());
  const QuadrangleCase qc =
      quadrangle_check(*K, C, ev.sigma_p - eta, ev.sigma_p + eta,
                       ev.sigma_p + gap - eta, ev.sigma_p + gap + eta);
  ev.lhs = qc.lhs;
  ev.rhs = qc.rhs;
  return ev;
}

}  // namespace

ViolationReport verify_violation(const SymmetricDisk& disk,
                                 const CounterexampleSpec& spec,
                                 const std::vector<double>& sbar_grid) {
  ViolationReport report;
  report.predicted = asymptotic_coefficient(spec.kappa0, spec.lambda);

  for (double sbar : sbar_grid) {
    ViolationPoint pt;
    pt.sbar = sbar;
    try {
      if (sbar > spec.s0)
        throw Error("sbar outside the parabolic window");
      const AngleFrame f = section4_frame(spec.kappa0, spec.lambda, sbar);
      pt.frame_ok = frame_ordered(f);
      if (!pt.frame_ok) throw Error("frame order violated");
      pt.analytic = mixed_partial_A(f);
      pt.ratio = pt.analytic / (sbar * sbar * sbar * sbar);
      pt.ratio_linear = pt.analytic / sbar;
    } catch (const Error& e) {
      pt.error = e.what();
    }
    report.points.push_back(pt);
  }

  QuadrangleWitness& w = report.witness;
  w.attempted = true;
  try {
    // witness window: the margin scales like |d_s d_t A| (2 eta)^2 with eta
    // capped by the contact excursion ~ 1 / (2 kappa0 sbar), so a wider
    // parabolic window than the ratio runs use gives a measurable margin
    CounterexampleSpec wspec = spec;
    const bool widen = wspec.s0 < 0.15;
    if (widen) {
      wspec.s0 = 0.2;
      wspec.delta = 0.9;
      wspec.eps = std::max(wspec.eps, 0.6);
    }
    wspec.validate();
    w.sbar = 0.75 * wspec.s0;
    w.eta = 0.5 * wspec.kappa0 * w.sbar * (wspec.s0 - w.sbar);

    const SymmetricDisk base_disk =
        widen ? build_counterexample_disk(wspec) : disk;
    const WitnessEval ev =
        witness_margin(base_disk, wspec.kappa0, w.sbar, w.eta);
    const double gap = wrap(ev.sigma_q - ev.sigma_p, ev.body.perimeter());
    w.s1 = ev.sigma_p - w.eta;
    w.s2 = ev.sigma_p + w.eta;
    w.s3 = ev.sigma_p + gap - w.eta;
    w.s4 = ev.sigma_p + gap + w.eta;
    w.lhs = ev.lhs;
    w.rhs = ev.rhs;
    w.margin = ev.rhs - ev.lhs;
    w.violated = w.margin > 0.0;

    CounterexampleSpec fine = wspec;
    fine.samples *= 2;
    const SymmetricDisk fine_disk = build_counterexample_disk(fine);
    const WitnessEval ev2 =
        witness_margin(fine_disk, wspec.kappa0, w.sbar, w.eta);
    w.lhs_fine = ev2.lhs;
    w.rhs_fine = ev2.rhs;
    w.margin_fine = ev2.rhs - ev2.lhs;
    w.stable = w.violated && w.margin_fine > 0.0 &&
               std::abs(w.margin_fine - w.margin) <= 0.05 * std::abs(w.margin);
  } catch (const Error& e) {
    w.error = e.what();
  }
  return report;
}

}  // namespace spindle
