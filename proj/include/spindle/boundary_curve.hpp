#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <memory>

#include "spindle/types.hpp"

namespace spindle {

/// Periodic curvature function kappa(s) sampled on a uniform arclength grid
/// over [0, L). Generator of strictly convex disks.
struct CurvatureProfile {
  Eigen::ArrayXd kappa;  // kappa_i = kappa(i * length / n)
  double length = 0.0;

  int samples() const { return static_cast<int>(kappa.size()); }
  double step() const { return length / samples(); }

  /// Positivity and total-turning checks; throws on failure.
  void validate(double turning_tol = 1e-6) const;

  /// Total turning computed by the grid quadrature used everywhere else.
  double total_turning() const;

  bool half_period_symmetric(double tol = 1e-9) const;

  static CurvatureProfile circle(double radius, int n = kDefaultSamples);

  /// Disk with support function h(psi) = scale * (1 + e * cos(2 psi)),
  /// resampled to a uniform arclength grid. Requires |e| < 1/3.
  static CurvatureProfile support_harmonic(double e, int n = kDefaultSamples,
                                           double scale = 1.0);

  void write_csv(std::ostream& out) const;
  static CurvatureProfile read_csv(std::istream& in);
};

struct CurvePoint {
  Vec2 position;
  double phi;    // tangent angle, continuous lift
  double kappa;  // curvature
};

/// Arclength-parametrized closed convex curve reconstructed from curvature
/// data. phi(s) is stored as a continuous monotone lift; positions are
/// interpolated with cubic Hermite cells using the exact unit tangents.
class BoundaryCurve {
 public:
  /// Integrate phi' = kappa, position' = (cos phi, sin phi) with the
  /// convention phi(0) = pi (tangent along the negative x-axis) and the
  /// curve translated so that its node mean sits at the origin. Profiles
  /// whose closure residual exceeds closure_tol * L are rejected.
  static BoundaryCurve reconstruct(const CurvatureProfile& profile,
                                   double closure_tol = 1e-9);

  double length() const { return length_; }
  int samples() const { return static_cast<int>(kappa_.size()); }
  double step() const { return length_ / samples(); }

  CurvePoint eval(double s) const;
  Vec2 position(double s) const { return eval(s).position; }
  double tangent_angle(double s) const;  // continuous lift, phi(s+L)=phi(s)+2pi
  double curvature(double s) const;

  /// phi-increase along the counterclockwise arc from s1 to s2, in [0, 2pi].
  double turning_angle(double s1, double s2) const;

  /// Outer normal angle psi(s) = phi(s) - pi/2 (continuous lift).
  double normal_angle(double s) const { return tangent_angle(s) - kPi / 2.0; }

  /// Inverse of the (monotone) normal angle lift.
  double param_at_normal(double psi) const;

  /// Support function h(u) for u = (cos psi, sin psi).
  double support(double psi) const;

  /// Radius of curvature 1/kappa at the boundary point with outer normal psi.
  double curvature_radius_at_normal(double psi) const;

  double area() const { return 0.5 * area_total_; }

  /// Integral of det(Theta(u), Theta'(u)) over [s0, s1], s1 >= s0 on the lift.
  double area_integral(double s0, double s1) const;

  /// Boundary point parameter at position angle beta (curve must enclose o).
  double param_at_position_angle(double beta) const;

  /// Minkowski gauge of v with respect to the enclosed region: <1 inside,
  /// 1 on the boundary.
  double gauge(const Vec2& v) const;

  double closure_residual() const { return closure_residual_; }

  CurvatureProfile extract_profile() const;

  double max_kappa() const { return kappa_.maxCoeff(); }
  double min_kappa() const { return kappa_.minCoeff(); }

  /// True when the curvature is constant to machine tolerance.
  bool is_circle(double tol = 1e-12) const;

  void write_csv(std::ostream& out) const;

 private:
  BoundaryCurve() = default;
  void build_tables();
  int cell_of(double s, double& u) const;

  double length_ = 0.0;
  double closure_residual_ = 0.0;
  double area_total_ = 0.0;  // integral of det(Theta, Theta') over a period
  Eigen::ArrayXd kappa_, phi_, x_, y_, area_cum_, pos_angle_;
};

/// An o-symmetric strictly convex disk: boundary curve centered at the
/// origin with Theta(s + L/2) = -Theta(s).
class SymmetricDisk {
 public:
  explicit SymmetricDisk(BoundaryCurve curve, double symmetry_tol = 1e-8);

  static SymmetricDisk circle(double radius, int n = kDefaultSamples);
  static SymmetricDisk support_harmonic(double e, int n = kDefaultSamples,
                                        double scale = 1.0);

  const BoundaryCurve& boundary() const { return *curve_; }
  double length() const { return curve_->length(); }
  double area() const { return curve_->area(); }

  bool is_circle() const { return is_circle_; }
  double circle_radius() const { return circle_radius_; }

  /// Shared handle used by bodies that reference this disk as generator.
  std::shared_ptr<const BoundaryCurve> curve_handle() const { return curve_; }

 private:
  std::shared_ptr<const BoundaryCurve> curve_;
  bool is_circle_ = false;
  double circle_radius_ = 0.0;
};

}  // namespace spindle
