// Acceptance gate: one printed pass/fail line per criterion, pinned
// tolerances. Exit status = number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <vector>

#include "spindle/construct.hpp"
#include "spindle/dowker_lab.hpp"
#include "spindle/metrics.hpp"
#include "spindle/variation.hpp"

using namespace spindle;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

void report(int id, const char* what, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s - %s (%s)\n", id, pass ? "PASS" : "FAIL", what,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

/// Relative error with a unit floor (degenerate configurations produce exact
/// zeros whose pure relative error divides noise by noise).
double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1.0);
}

std::pair<double, double> sample_admissible(const CPolygon& K, Rng& rng) {
  const double P = K.perimeter();
  for (int tries = 0; tries < 4000; ++tries) {
    const double s = rng.uniform(0.0, P);
    const double t = s + rng.uniform(0.05 * P, 0.45 * P);
    if (K.turning(s, t) > kPi - 0.05) continue;
    if (K.corner_distance(s) < 1e-3 || K.corner_distance(t) < 1e-3) continue;
    return {s, t};
  }
  throw Error("no admissible sample");
}

// ---------------------------------------------------------------- 1

void criterion1() {
  Timer timer;
  auto C = make_disk_ref(SymmetricDisk::circle(1.0));
  Rng rng(2024, "acceptance-bodies");
  double worst = -1e300;
  for (int body = 0; body < 20; ++body) {
    const int k = rng.uniform_int(2, 5);
    std::vector<Vec2> offsets = {Vec2(0.0, 0.0)};
    for (int j = 1; j < k; ++j) {
      const double r = 0.5 * std::sqrt(rng.uniform());
      const double a = rng.uniform(0.0, kTwoPi);
      offsets.emplace_back(r * std::cos(a), r * std::sin(a));
    }
    auto K = intersect_translates(C, offsets);
    if (!K) throw Error("acceptance: empty random body");
    const DowkerReport rep = dowker_report(*K, C, 4, 8, 2048);
    for (const auto& [n, d] : rep.second_differences)
      worst = std::max(worst, d / K->area());
  }
  report(1, "Theorem 1: second differences <= 1e-6*area(K), 20 random bodies, "
            "C = B^2, n in [4,8], M = 2048",
         worst <= 1e-6,
         fmt("max second_diff/area = %.3g, tol 1e-6, %.0f s (budget 300 s)",
             worst, timer.seconds()));
}

// ---------------------------------------------------------------- 2 and 3

struct DerivStats {
  double worst_first = 0.0;   // partials and mixed S
  double worst_mixed_a = 0.0; // mixed partial of Abar vs Richardson FD
  double min_mixed_a_circle = 1e300;
};

void deriv_samples(const DiskRef& C, const CPolygon& K, const char* label,
                   bool circle_C, DerivStats& st) {
  Rng rng(2024, std::string("acceptance-deriv-") + label);
  const double L = C->length();
  for (int i = 0; i < 50; ++i) {
    const auto [s, t] = sample_admissible(K, rng);
    const AngleFrame f = angle_frame(C, K, s, t);
    const auto d = partials_ST(f);
    const auto base = solve_ST(C, K, s, t);
    auto lift = [&](double v, double ref) {
      return v + L * std::round((ref - v) / L);
    };
    auto S_of = [&](double a, double b) {
      return lift(solve_ST(C, K, a, b).S, base.S);
    };
    auto T_of = [&](double a, double b) {
      return lift(solve_ST(C, K, a, b).T, base.T);
    };
    const double h = 1e-5;
    st.worst_first = std::max(
        {st.worst_first,
         rel_err(d.dS_ds, (S_of(s + h, t) - S_of(s - h, t)) / (2 * h)),
         rel_err(d.dS_dt, (S_of(s, t + h) - S_of(s, t - h)) / (2 * h)),
         rel_err(d.dT_ds, (T_of(s + h, t) - T_of(s - h, t)) / (2 * h)),
         rel_err(d.dT_dt, (T_of(s, t + h) - T_of(s, t - h)) / (2 * h))});
    const double h2 = 1e-4;
    const double fd_mixed =
        (S_of(s + h2, t + h2) - S_of(s + h2, t - h2) - S_of(s - h2, t + h2) +
         S_of(s - h2, t - h2)) /
        (4 * h2 * h2);
    st.worst_first = std::max(st.worst_first,
                              rel_err(mixed_partial_S(f), fd_mixed));

    auto abar = [&](double a, double b) { return -region_area(K, C, a, b); };
    auto stencil = [&](double hh) {
      return (abar(s + hh, t + hh) - abar(s + hh, t - hh) -
              abar(s - hh, t + hh) + abar(s - hh, t - hh)) /
             (4 * hh * hh);
    };
    const double ha = 1e-4 * K.perimeter();
    const double rich = (4.0 * stencil(0.5 * ha) - stencil(ha)) / 3.0;
    const double ma = mixed_partial_A(f);
    st.worst_mixed_a = std::max(st.worst_mixed_a, rel_err(ma, rich));
    if (circle_C) st.min_mixed_a_circle = std::min(st.min_mixed_a_circle, ma);
  }
}

void criteria23() {
  Timer timer;
  auto ball = make_disk_ref(SymmetricDisk::circle(1.0));
  auto smoothC = make_disk_ref(SymmetricDisk::support_harmonic(0.08));
  const CPolygon lens = make_lens(ball);
  auto three = intersect_translates(
      ball, {Vec2(0.0, 0.0), Vec2(0.4, 0.0), Vec2(0.2, 0.346)});
  const CPolygon lens_smooth = make_lens(smoothC, -1.0);

  DerivStats st;
  deriv_samples(ball, lens, "lens", true, st);
  deriv_samples(ball, *three, "three", true, st);
  deriv_samples(smoothC, lens_smooth, "smoothC", false, st);
  const double t2 = timer.seconds();

  report(2, "Lemma 6: partials and mixed d_s d_t S vs central FD of solve_ST, "
            "50 samples x {lens, 3-disk, non-circular C}",
         st.worst_first <= 1e-5,
         fmt("max rel err = %.3g, tol 1e-5, %.1f s (budget 60 s)",
             st.worst_first, t2));
  report(3, "eq genform: mixed d_s d_t Abar vs Richardson FD of region_area; "
            ">= -1e-9 for C = B^2",
         st.worst_mixed_a <= 1e-4 && st.min_mixed_a_circle >= -1e-9,
         fmt("max rel err = %.3g (tol 1e-4), min value for C = B^2 = %.3g "
             "(floor -1e-9)",
             st.worst_mixed_a, st.min_mixed_a_circle));
}

// ---------------------------------------------------------------- 4

void criterion4() {
  double worst = 0.0, min_val = 1e300;
  // admissible wedge: theta in (0, pi/2), gamma_p in (theta, pi - theta),
  // gamma_q in (pi + theta, gamma_p + pi)
  const double margin = 1e-3;
  for (int i = 0; i < 50; ++i) {
    const double theta = 0.05 + (kPi / 2.0 - 0.1) * i / 49.0;
    for (int j = 0; j < 50; ++j) {
      const double gp =
          theta + 2.0 * margin + (kPi - 2.0 * theta - 4.0 * margin) * j / 49.0;
      for (int k = 0; k < 50; ++k) {
        const double gq =
            kPi + theta + margin + (gp - theta - 2.0 * margin) * k / 49.0;
        const double a = euclidean_mixed_partial(theta, gp, gq);
        const double b = euclidean_mixed_partial_rearranged(theta, gp, gq);
        worst = std::max(worst, std::abs(a - b));
        min_val = std::min(min_val, a);
      }
    }
  }
  // minimum over gamma_p + gamma_q at fixed difference sits at 2 pi
  const double theta = 0.7, diff = 2.0;
  int argmin = -1;
  double best = 1e300;
  const int grid = 401;
  for (int i = 0; i < grid; ++i) {
    const double sum = 2.0 * kPi - 0.45 + 0.9 * i / (grid - 1);
    const double gp = 0.5 * (sum - diff), gq = 0.5 * (sum + diff);
    const double v = euclidean_mixed_partial(theta, gp, gq);
    if (v < best) {
      best = v;
      argmin = i;
    }
  }
  const double sum_at_min = 2.0 * kPi - 0.45 + 0.9 * argmin / (grid - 1);
  const double step = 0.9 / (grid - 1);
  const bool min_ok = std::abs(sum_at_min - 2.0 * kPi) <= step + 1e-12;
  report(4, "Euclidean identity: genform2 == genform4 on a 50^3 grid; minimum "
            "at gamma_p + gamma_q = 2 pi; positive on the domain",
         worst <= 1e-12 && min_ok && min_val > 0.0,
         fmt("max |genform2 - genform4| = %.3g (tol 1e-12), argmin offset "
             "%.4f (step %.4f), interior min %.3g",
             worst, sum_at_min - 2.0 * kPi, step, min_val));
}

// ---------------------------------------------------------------- 5

void criterion5() {
  Timer timer;
  CounterexampleSpec spec;  // kappa0 = 1, lambda = 5
  const SymmetricDisk disk = build_counterexample_disk(spec);
  const ViolationReport rep =
      verify_violation(disk, spec, {0.003, 0.005, 0.01});

  bool ratio_ok = true;
  for (const auto& p : rep.points)
    if (!p.error.empty() || std::abs(p.ratio / (-4.0 / 3.0) - 1.0) > 0.10)
      ratio_ok = false;

  const QuadrangleWitness& w = rep.witness;
  const bool witness_ok = w.error.empty() && w.violated && w.stable;

  CounterexampleSpec ctrl;
  ctrl.lambda = 4.0;
  ctrl.allow_control = true;
  const SymmetricDisk cdisk = build_counterexample_disk(ctrl);
  const ViolationReport crep =
      verify_violation(cdisk, ctrl, {0.003, 0.005, 0.01});
  bool ctrl_ratio_ok = true, ctrl_sign_ok = true;
  for (const auto& p : crep.points) {
    if (!p.error.empty() || std::abs(p.ratio / (4.0 / 3.0) - 1.0) > 0.10)
      ctrl_ratio_ok = false;
    if (!p.error.empty() || p.analytic <= 0.0) ctrl_sign_ok = false;
  }
  const bool ctrl_no_violation =
      crep.witness.error.empty() && !crep.witness.violated;

  report(5, "section 4 asymptotics: ratio within 10% of -4/3 at sbar in "
            "{0.003, 0.005, 0.01}; violation certified at two resolutions; "
            "lambda = 4 control",
         ratio_ok && witness_ok && ctrl_ratio_ok && ctrl_no_violation,
         fmt("ratio clause %s, witness %s (margin %.3g, fine %.3g), control "
             "ratio clause %s, control sign %s, no control violation %s, "
             "%.0f s (budget 120 s)",
             ratio_ok ? "pass" : "FAIL", witness_ok ? "certified" : "FAIL",
             w.margin, w.margin_fine, ctrl_ratio_ok ? "pass" : "FAIL",
             ctrl_sign_ok ? "pass" : "FAIL",
             ctrl_no_violation ? "pass" : "FAIL", timer.seconds()));
  if (!ratio_ok || !ctrl_ratio_ok) {
    std::printf(
        "  note: the frame mixed partial scales linearly in sbar, not "
        "quartically; observed (d_s d_t A)/sbar -> (9 k0^3 - 2 l)/(6 k0^2)\n");
    for (const auto& p : rep.points)
      std::printf("  note: sbar = %.3f  d_s d_t A = %.6e  /sbar = %.6f  "
                  "(predicted linear coefficient %.6f)\n",
                  p.sbar, p.analytic, p.ratio_linear,
                  mixed_partial_leading_coefficient(spec.kappa0, spec.lambda));
    std::printf(
        "  note: the sign threshold lambda = 9 k0^3 / 2 and the violation "
        "itself are confirmed; see the quartic/linear analysis in the "
        "README numerics notes\n");
  }
}

// ---------------------------------------------------------------- 6

void criterion6() {
  double worst_ratio = 0.0;
  for (double sbar = 1e-3; sbar <= 1.0001e-2; sbar *= std::pow(10.0, 0.0625)) {
    const double budget = 10.0 * std::pow(sbar, 7);
    worst_ratio =
        std::max(worst_ratio, chord_expansion_error(1.0, 5.0, sbar) / budget);
  }
  double worst_sin = 0.0;
  for (double sbar = 1e-3; sbar <= 1.0001e-2; sbar *= std::pow(10.0, 0.0625)) {
    worst_sin = std::max(
        worst_sin, std::abs(chord_length_expansion(1.0, 0.0, sbar) -
                            (2.0 * sbar - sbar * sbar * sbar / 3.0 +
                             std::pow(sbar, 5) / 60.0)));
    worst_sin = std::max(worst_sin, std::abs(window_chord(1.0, 0.0, sbar) -
                                             2.0 * std::sin(sbar)));
  }
  report(6, "chord expansion: |numeric chord - expansion| <= 10 sbar^7 on "
            "[1e-3, 1e-2]; lambda = 0 reproduces 2 sin sbar",
         worst_ratio <= 1.0 && worst_sin <= 1e-15,
         fmt("max error/budget = %.3g, lambda = 0 deviation %.3g (tol 1e-15)",
             worst_ratio, worst_sin));
}

// ---------------------------------------------------------------- 7

void criterion7() {
  const SymmetricDisk ball = SymmetricDisk::circle(1.0);
  double worst_h = 0.0;
  bool pm_ok = true;
  for (int n : {10, 100, 1000}) {
    DiskWithSpikes dn{1.0, 1.0 + 1.0 / n};
    worst_h = std::max(worst_h,
                       std::abs(hausdorff_distance(dn, ball) - 1.0 / n));
    const auto pm = pm_distance_spiked(dn, ball);
    const bool atom_witness =
        !pm.witness.arcs.empty() && pm.witness.arcs.front().is_atom(1e-12) &&
        std::abs(pm.witness.arcs.front().start - dn.segment_normal()) <= 1e-12;
    if (!pm.infinite || !atom_witness) pm_ok = false;
  }
  const auto square = ConvexPolygonBody::square(1.0);
  const auto moved = ConvexPolygonBody::square(1.0, 0.0, Vec2(3.0, -1.0));
  const auto rotated = ConvexPolygonBody::square(1.0, 10.0 * kPi / 180.0);
  const auto scaled = ConvexPolygonBody::square(2.0);
  const auto r_t = pm_distance_polygon(square, moved);
  const bool poly_ok = !r_t.infinite && r_t.value == 0.0 &&
                       pm_distance_polygon(square, rotated).infinite &&
                       pm_distance_polygon(square, scaled).infinite;
  report(7, "Proposition 8 demo: d_H(D_n, B^2) = 1/n within 1e-6, PM Infinite "
            "with vertex-atom witness; Remark 10 polygon topology exact",
         worst_h <= 1e-6 && pm_ok && poly_ok,
         fmt("max |d_H - 1/n| = %.3g (tol 1e-6), spiked PM %s, polygon cases %s",
             worst_h, pm_ok ? "ok" : "FAIL", poly_ok ? "ok" : "FAIL"));
}

// ---------------------------------------------------------------- 8

double brute_force_grid(const CPolygon& K, const DiskRef& C, int n, int M) {
  std::vector<double> sig(M);
  std::vector<Vec2> pts(M);
  for (int i = 0; i < M; ++i) {
    sig[i] = K.perimeter() * i / M;
    pts[i] = K.eval(sig[i]).position;
  }
  double best = -1e300;
  std::vector<int> idx(n);
  std::vector<Vec2> verts(n);
  auto rec = [&](auto&& self, int depth, int start) -> void {
    if (depth == n) {
      for (int i = 0; i < n; ++i) verts[i] = pts[idx[i]];
      try {
        best = std::max(best, c_ngon_area(C, verts));
      } catch (const Error&) {
      }
      return;
    }
    for (int i = start; i < M; ++i) {
      idx[depth] = i;
      self(self, depth + 1, i + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

void criterion8() {
  Timer timer;
  auto C = make_disk_ref(SymmetricDisk::circle(1.0));
  // asymmetric bodies keep the grid optimum unique (symmetric bodies carry
  // tuples equal up to 1 ulp, where the two evaluators may split ties);
  // both optima evaluated through c_ngon_area so that "exact" compares the
  // same floating-point expression on the same vertex tuple
  auto two = intersect_translates(C, {Vec2(0.0, 0.0), Vec2(0.37, 0.12)});
  auto asym = intersect_translates(
      C, {Vec2(0.0, 0.0), Vec2(0.3, 0.05), Vec2(0.1, 0.33)});
  auto canonical_area = [&](const InscribedResult& r) {
    // rotate so the smallest boundary parameter comes first: identical vertex
    // sequence, hence identical summation order, as the brute force
    std::size_t lo = 0;
    for (std::size_t i = 1; i < r.sigmas.size(); ++i)
      if (r.sigmas[i] < r.sigmas[lo]) lo = i;
    std::vector<Vec2> verts;
    for (std::size_t i = 0; i < r.vertices.size(); ++i)
      verts.push_back(r.vertices[(lo + i) % r.vertices.size()]);
    return c_ngon_area(C, verts);
  };
  double exact_gap = 0.0;
  {
    const auto dp = max_inscribed_area_grid(*two, C, 3, 36);
    exact_gap = std::max(exact_gap, std::abs(canonical_area(dp) -
                                             brute_force_grid(*two, C, 3, 36)));
    const auto dp4 = max_inscribed_area_grid(*asym, C, 4, 24);
    exact_gap = std::max(exact_gap, std::abs(canonical_area(dp4) -
                                             brute_force_grid(*asym, C, 4, 24)));
  }

  auto three = intersect_translates(
      C, {Vec2(0.0, 0.0), Vec2(0.4, 0.0), Vec2(0.2, 0.346)});
  bool monotone = true;
  double prev = -1e300, stability = 0.0;
  for (int n = 4; n <= 6; ++n) {
    const auto a2 = max_inscribed_area(*three, C, n, 2048);
    const auto a4 = max_inscribed_area(*three, C, n, 4096);
    if (a2.area < prev - 1e-12 * three->area()) monotone = false;
    prev = a2.area;
    stability = std::max(stability,
                         std::abs(a4.area - a2.area) / three->area());
  }
  report(8, "DP: equals exhaustive enumeration exactly (M <= 40, n <= 4); "
            "a_n monotone; stable within 1e-5*area between M = 2048 and 4096",
         exact_gap == 0.0 && monotone && stability <= 1e-5,
         fmt("exhaustive gap = %.3g (tol 0), monotone %s, |a(4096) - a(2048)|"
             "/area = %.3g (tol 1e-5), %.0f s",
             exact_gap, monotone ? "yes" : "NO", stability, timer.seconds()));
}

}  // namespace

int main() {
  try {
    criterion1();
    criteria23();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
  } catch (const std::exception& e) {
    std::printf("acceptance: unexpected error: %s\n", e.what());
    return 99;
  }
  std::printf("%d of 8 criteria failed\n", failures);
  return failures;
}
