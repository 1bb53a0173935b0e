#include <cmath>

#include "doctest.h"
#include "spindle/construct.hpp"
#include "spindle/dowker_lab.hpp"
#include "spindle/variation.hpp"

using namespace spindle;

TEST_CASE("junction residuals vanish") {
  CounterexampleSpec narrow;
  const JunctionResiduals rn = junction_residuals(narrow);
  CHECK(std::abs(rn.turning) <= 1e-9);
  CHECK(std::abs(rn.pos_x) <= 1e-9);
  CHECK(std::abs(rn.pos_y) <= 1e-9);

  CounterexampleSpec wide;
  wide.s0 = 0.2;
  wide.delta = 0.9;
  wide.eps = 0.6;
  const JunctionResiduals rw = junction_residuals(wide);
  CHECK(std::abs(rw.turning) <= 1e-9);
  CHECK(std::abs(rw.pos_x) <= 1e-9);
  CHECK(std::abs(rw.pos_y) <= 1e-9);
}

TEST_CASE("built disk invariants") {
  CounterexampleSpec spec;
  const SymmetricDisk disk = build_counterexample_disk(spec);
  const BoundaryCurve& c = disk.boundary();
  CHECK(c.closure_residual() <= 1e-8);
  // curvature stays within the deviation budget around the base circle
  CHECK(c.max_kappa() <= 1.0 + spec.eps + 1e-6);
  CHECK(c.min_kappa() >= 1.0 - spec.eps - 1e-6);
  // shaving curvature at the apex pushes the boundary inward slightly
  CHECK(c.area() <= kPi);
  CHECK(c.area() >= kPi - 1e-4);
}

TEST_CASE("lambda = 0 with the control flag reproduces the base circle") {
  CounterexampleSpec spec;
  spec.lambda = 0.0;
  spec.allow_control = true;
  const SymmetricDisk disk = build_counterexample_disk(spec);
  CHECK(disk.boundary().max_kappa() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(disk.boundary().min_kappa() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(disk.boundary().area() == doctest::Approx(kPi).epsilon(1e-9));
}

TEST_CASE("window chord matches the fifth-order expansion") {
  for (double sbar = 1e-3; sbar <= 1.0001e-2; sbar *= std::pow(10.0, 0.125)) {
    const double budget = 10.0 * std::pow(sbar, 7);
    CHECK(chord_expansion_error(1.0, 5.0, sbar) <= budget);
    // negative control: dropping lambda from the s^5 coefficient breaks it
    const double wrong =
        std::abs(window_chord(1.0, 5.0, sbar) - chord_length_expansion(1.0, 0.0, sbar));
    CHECK(wrong > budget);
  }
  // lambda = 0: the chord is exactly 2 sin(sbar)
  for (double sbar : {1e-3, 1e-2, 1e-1}) {
    CHECK(std::abs(window_chord(1.0, 0.0, sbar) - 2.0 * std::sin(sbar)) <=
          1e-16);
  }
}

TEST_CASE("coefficient formulas") {
  CHECK(asymptotic_coefficient(1.0, 5.0) ==
        doctest::Approx(-4.0 / 3.0).epsilon(1e-14));
  CHECK(asymptotic_coefficient(1.0, 4.5) == doctest::Approx(0.0));
  CHECK(asymptotic_coefficient(1.0, 0.0) == doctest::Approx(12.0));
  CHECK(mixed_partial_leading_coefficient(1.0, 5.0) ==
        doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
  CHECK(mixed_partial_leading_coefficient(1.0, 4.5) == doctest::Approx(0.0));
  CHECK(mixed_partial_leading_coefficient(1.0, 0.0) == doctest::Approx(1.5));
}

TEST_CASE("frame mixed partial is linear in sbar with the predicted slope") {
  CounterexampleSpec spec;
  const SymmetricDisk disk = build_counterexample_disk(spec);
  for (double lambda : {5.0, 4.0, 0.0}) {
    CounterexampleSpec s = spec;
    s.lambda = lambda;
    s.allow_control = lambda <= 4.5;
    const SymmetricDisk d = lambda == 5.0 ? disk : build_counterexample_disk(s);
    const double pred = mixed_partial_leading_coefficient(1.0, lambda);
    auto rep = verify_violation(d, s, {0.005, 0.01, 0.02});
    for (const auto& pt : rep.points) {
      REQUIRE(pt.error.empty());
      CHECK(pt.frame_ok);
      // quadratic correction: |ratio_linear - pred| = O(sbar^2)
      CHECK(std::abs(pt.ratio_linear - pred) <= 10.0 * pt.sbar * pt.sbar);
    }
    // Richardson in sbar kills the quadratic term
    const double extrap =
        (4.0 * rep.points[1].ratio_linear - rep.points[2].ratio_linear) / 3.0;
    CHECK(extrap == doctest::Approx(pred).epsilon(2e-4));
  }
}

TEST_CASE("frame mixed partial agrees with finite differences of the area") {
  // explicit C-2-gon with the prescribed tangents on the unit circle
  const SymmetricDisk ball = SymmetricDisk::circle(1.0);
  const DiskRef C = make_disk_ref(ball);
  const BoundaryCurve& c = ball.boundary();
  const double L = c.length();
  const double sb = 0.05;
  const Vec2 p = c.position(L - sb), q = c.position(sb);
  const double gp = kPi / 2.0 + sb, gq = 1.5 * kPi - sb;
  const double P = c.param_at_normal(gp - kPi / 2.0);
  const double Q = c.param_at_normal(gq - kPi / 2.0);
  const Vec2 xp = p - c.position(P), xq = q - c.position(Q);
  auto K = intersect_translates(C, {xp, xq});
  REQUIRE(K);
  auto locate = [&](const Vec2& xt, double par) {
    for (std::size_t i = 0; i < K->arcs().size(); ++i) {
      if ((K->arcs()[i].translate - xt).norm() > 1e-9) continue;
      const double lift = K->arcs()[i].S + wrap(par - K->arcs()[i].S, L);
      if (lift <= K->arcs()[i].T + 1e-9)
        return K->arc_start(static_cast<int>(i)) + (lift - K->arcs()[i].S);
    }
    throw Error("contact not found");
  };
  const double sp = locate(xp, P), sq = locate(xq, Q);
  const AngleFrame f = angle_frame(C, *K, sp, sq);
  CHECK(f.gamma_p == doctest::Approx(gp).epsilon(1e-8));
  CHECK(f.gamma_q == doctest::Approx(gq).epsilon(1e-8));
  const double analytic = mixed_partial_A(f);

  auto abar = [&](double s, double t) { return -region_area(*K, C, s, t); };
  auto mixed = [&](double h) {
    return (abar(sp + h, sq + h) - abar(sp + h, sq - h) -
            abar(sp - h, sq + h) + abar(sp - h, sq - h)) /
           (4.0 * h * h);
  };
  const double h = 1e-3;
  const double rich = (4.0 * mixed(h / 2.0) - mixed(h)) / 3.0;
  CHECK(analytic == doctest::Approx(rich).epsilon(1e-6));
}

TEST_CASE("violation witness: certified for lambda = 5, absent for lambda = 4") {
  CounterexampleSpec spec;  // lambda = 5
  const SymmetricDisk disk = build_counterexample_disk(spec);
  auto rep = verify_violation(disk, spec, {});
  const QuadrangleWitness& w = rep.witness;
  REQUIRE(w.error.empty());
  CHECK(w.attempted);
  CHECK(w.violated);
  CHECK(w.stable);
  CHECK(w.margin > 1e-7);
  CHECK(w.s1 < w.s2);
  CHECK(w.s2 < w.s3);
  CHECK(w.s3 < w.s4);
  CHECK(std::abs(w.margin_fine - w.margin) <= 0.05 * std::abs(w.margin));

  CounterexampleSpec ctrl;
  ctrl.lambda = 4.0;
  ctrl.allow_control = true;
  const SymmetricDisk cdisk = build_counterexample_disk(ctrl);
  auto crep = verify_violation(cdisk, ctrl, {});
  REQUIRE(crep.witness.error.empty());
  CHECK_FALSE(crep.witness.violated);
  CHECK(crep.witness.margin < 0.0);
}

TEST_CASE("spec validation") {
  CounterexampleSpec bad;
  bad.s0 = 0.3;
  bad.delta = 0.2;
  CHECK_THROWS_AS(bad.validate(), Error);

  CounterexampleSpec control;
  control.lambda = 4.0;
  CHECK_THROWS_AS(control.validate(), Error);
  control.allow_control = true;
  CHECK_NOTHROW(control.validate());

  CounterexampleSpec negative;
  negative.lambda = 500.0;
  CHECK_THROWS_AS(negative.validate(), Error);

  CounterexampleSpec overlap;
  overlap.delta = 1.6;
  CHECK_THROWS_AS(overlap.validate(), Error);

  CounterexampleSpec coarse;
  coarse.samples = 100;
  CHECK_THROWS_AS(coarse.validate(), Error);
}
