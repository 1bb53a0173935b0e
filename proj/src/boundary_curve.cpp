#include "spindle/boundary_curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace spindle {

namespace {

// Cumulative integral of uniformly sampled periodic data, 4th order:
// each interval uses the cubic through the four surrounding nodes.
Eigen::ArrayXd cumulative_periodic(const Eigen::ArrayXd& f, double h) {
  const int n = static_cast<int>(f.size());
  Eigen::ArrayXd out(n + 1);
  out[0] = 0.0;
  auto at = [&](int i) { return f[((i % n) + n) % n]; };
  for (int i = 0; i < n; ++i) {
    double inc = (-at(i - 1) + 13.0 * at(i) + 13.0 * at(i + 1) - at(i + 2)) *
                 h / 24.0;
    out[i + 1] = out[i] + inc;
  }
  return out;
}

double hermite(double p0, double m0, double p1, double m1, double h, double u) {
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * p0 + (u3 - 2 * u2 + u) * h * m0 +
         (-2 * u3 + 3 * u2) * p1 + (u3 - u2) * h * m1;
}

// Cubic Lagrange through nodes at u = -1, 0, 1, 2.
double lagrange4(double fm1, double f0, double f1, double f2, double u) {
  return -fm1 * u * (u - 1) * (u - 2) / 6.0 + f0 * (u + 1) * (u - 1) * (u - 2) / 2.0 -
         f1 * (u + 1) * u * (u - 2) / 2.0 + f2 * (u + 1) * u * (u - 1) / 6.0;
}

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

void CurvatureProfile::validate(double turning_tol) const {
  if (samples() < 16 || length <= 0.0) throw Error("curvature profile: too few samples");
  if ((kappa <= 0.0).any()) throw Error("curvature profile: kappa must be positive");
  const double turn = total_turning();
  if (std::abs(turn - kTwoPi) > turning_tol)
    throw Error("curvature profile: total turning " + fmt12(turn) +
                " differs from 2*pi by more than " + fmt12(turning_tol));
}

double CurvatureProfile::total_turning() const {
  return cumulative_periodic(kappa, step())[samples()];
}

bool CurvatureProfile::half_period_symmetric(double tol) const {
  const int n = samples();
  if (n % 2 != 0) return false;
  for (int i = 0; i < n / 2; ++i)
    if (std::abs(kappa[i] - kappa[i + n / 2]) > tol) return false;
  return true;
}

CurvatureProfile CurvatureProfile::circle(double radius, int n) {
  if (radius <= 0.0) throw Error("circle profile: radius must be positive");
  CurvatureProfile p;
  p.kappa = Eigen::ArrayXd::Constant(n, 1.0 / radius);
  p.length = kTwoPi * radius;
  return p;
}

CurvatureProfile CurvatureProfile::support_harmonic(double e, int n, double scale) {
  if (std::abs(e) >= 1.0 / 3.0)
    throw Error("support_harmonic: |e| must be < 1/3 for positive curvature");
  // Radius of curvature as a function of the normal angle: R = h + h''.
  // The reconstruction convention places the outer normal pi/2 at s = 0, so
  // sampling starts there.
  auto R = [&](double psi) {
    return scale * (1.0 - 3.0 * e * std::cos(2.0 * (psi + kPi / 2.0)));
  };
  const int m = 16 * n;  // fine normal-angle grid, even
  const double dpsi = kTwoPi / m;
  std::vector<double> s_of(m + 1);
  s_of[0] = 0.0;
  for (int i = 0; i < m; ++i) {  // per-interval Simpson
    const double a = i * dpsi, b = (i + 1) * dpsi;
    s_of[i + 1] = s_of[i] + (R(a) + 4.0 * R(0.5 * (a + b)) + R(b)) * dpsi / 6.0;
  }
  const double total = s_of[m];
  CurvatureProfile p;
  p.length = total;
  p.kappa.resize(n);
  int cell = 0;
  for (int j = 0; j < n; ++j) {
    const double target = total * j / n;
    while (cell + 1 < m && s_of[cell + 1] < target) ++cell;
    double psi = dpsi * (cell + (target - s_of[cell]) / (s_of[cell + 1] - s_of[cell]));
    for (int it = 0; it < 4; ++it) {  // Newton on s(psi) = target
      const double lo = std::floor(psi / dpsi);
      const int i0 = std::clamp(static_cast<int>(lo), 0, m - 1);
      const double a = i0 * dpsi;
      // local Simpson from grid point a to psi
      const double mid = 0.5 * (a + psi);
      const double sval = s_of[i0] + (R(a) + 4.0 * R(mid) + R(psi)) * (psi - a) / 6.0;
      psi -= (sval - target) / R(psi);
    }
    p.kappa[j] = 1.0 / R(psi);
  }
  return p;
}

void CurvatureProfile::write_csv(std::ostream& out) const {
  out << "s,kappa\n";
  for (int i = 0; i < samples(); ++i)
    out << fmt12(i * step()) << "," << fmt12(kappa[i]) << "\n";
}

CurvatureProfile CurvatureProfile::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("s,kappa", 0) != 0)
    throw Error("profile csv: missing 's,kappa' header");
  std::vector<double> s, k;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double sv, kv;
    char comma;
    if (!(ls >> sv >> comma >> kv)) throw Error("profile csv: bad row '" + line + "'");
    s.push_back(sv);
    k.push_back(kv);
  }
  if (s.size() < 16) throw Error("profile csv: too few rows");
  const int n = static_cast<int>(s.size());
  const double h = s[1] - s[0];
  for (int i = 1; i < n; ++i)
    if (std::abs(s[i] - i * h) > 1e-9 * h * n)
      throw Error("profile csv: samples must lie on a uniform grid");
  CurvatureProfile p;
  p.length = h * n;
  p.kappa = Eigen::Map<Eigen::ArrayXd>(k.data(), n);
  return p;
}

BoundaryCurve BoundaryCurve::reconstruct(const CurvatureProfile& profile,
                                         double closure_tol) {
  profile.validate();
  const int n = profile.samples();
  const double h = profile.step();
  BoundaryCurve c;
  c.length_ = profile.length;
  c.kappa_ = profile.kappa;

  Eigen::ArrayXd phi_cum = cumulative_periodic(c.kappa_, h);
  const double angle_residual = std::abs(phi_cum[n] - kTwoPi);
  c.phi_ = kPi + phi_cum.head(n);

  Eigen::ArrayXd cphi(n), sphi(n);
  for (int i = 0; i < n; ++i) {
    cphi[i] = std::cos(c.phi_[i]);
    sphi[i] = std::sin(c.phi_[i]);
  }
  Eigen::ArrayXd xc = cumulative_periodic(cphi, h);
  Eigen::ArrayXd yc = cumulative_periodic(sphi, h);
  c.closure_residual_ = std::hypot(xc[n], yc[n]);
  if (c.closure_residual_ > closure_tol * c.length_ || angle_residual > 1e-9)
    throw Error("reconstruct: profile does not close (position residual " +
                fmt12(c.closure_residual_) + ", angle residual " +
                fmt12(angle_residual) + ", gate " + fmt12(closure_tol * c.length_) +
                ")");
  c.x_ = xc.head(n) - xc.head(n).mean();
  c.y_ = yc.head(n) - yc.head(n).mean();
  c.build_tables();
  return c;
}

void BoundaryCurve::build_tables() {
  const int n = samples();
  const double h = step();
  Eigen::ArrayXd f(n);
  for (int i = 0; i < n; ++i)
    f[i] = x_[i] * std::sin(phi_[i]) - y_[i] * std::cos(phi_[i]);
  Eigen::ArrayXd cum = cumulative_periodic(f, h);
  area_total_ = cum[n];
  area_cum_ = cum.head(n);

  pos_angle_.resize(n);
  double prev = std::atan2(y_[0], x_[0]);
  pos_angle_[0] = prev;
  for (int i = 1; i < n; ++i) {
    prev = lift_angle(std::atan2(y_[i], x_[i]), prev - kPi + 1e-12);
    pos_angle_[i] = prev;
  }
}

int BoundaryCurve::cell_of(double s, double& u) const {
  const int n = samples();
  const double h = step();
  const double sw = wrap(s, length_);
  int i = std::min(static_cast<int>(sw / h), n - 1);
  u = sw / h - i;
  return i;
}

CurvePoint BoundaryCurve::eval(double s) const {
  const int n = samples();
  const double h = step();
  double u;
  const int i = cell_of(s, u);
  const int j = (i + 1) % n;
  const double phi1 = (j == 0) ? phi_[0] + kTwoPi : phi_[j];
  CurvePoint p;
  p.phi = hermite(phi_[i], kappa_[i], phi1, kappa_[j], h, u);
  p.kappa = lagrange4(kappa_[(i + n - 1) % n], kappa_[i], kappa_[j],
                      kappa_[(i + 2) % n], u);
  p.position.x() = hermite(x_[i], std::cos(phi_[i]), x_[j], std::cos(phi1), h, u);
  p.position.y() = hermite(y_[i], std::sin(phi_[i]), y_[j], std::sin(phi1), h, u);
  // report the lift consistent with the unwrapped input parameter
  p.phi += kTwoPi * std::floor(s / length_);
  return p;
}

double BoundaryCurve::tangent_angle(double s) const { return eval(s).phi; }

double BoundaryCurve::curvature(double s) const { return eval(s).kappa; }

double BoundaryCurve::turning_angle(double s1, double s2) const {
  const double ds = wrap(s2 - s1, length_);
  return tangent_angle(s1 + ds) - tangent_angle(s1);
}

double BoundaryCurve::param_at_normal(double psi) const {
  const int n = samples();
  const double psi0 = phi_[0] - kPi / 2.0;
  const double target = psi0 + wrap(psi - psi0, kTwoPi);
  // binary search over node normal angles (phi_ - pi/2, increasing)
  int lo = 0, hi = n;  // node hi==n means phi_[0] + 2pi
  auto node_psi = [&](int i) {
    return (i == n ? phi_[0] + kTwoPi : phi_[i]) - kPi / 2.0;
  };
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (node_psi(mid) <= target)
      lo = mid;
    else
      hi = mid;
  }
  double s = step() * lo;
  for (int it = 0; it < 40; ++it) {
    const CurvePoint p = eval(s);
    const double res = wrap(p.phi - kPi / 2.0 - target + kPi, kTwoPi) - kPi;
    if (std::abs(res) < 1e-14) break;
    s -= res / p.kappa;
  }
  return wrap(s, length_);
}

double BoundaryCurve::support(double psi) const {
  const Vec2 u(std::cos(psi), std::sin(psi));
  return position(param_at_normal(psi)).dot(u);
}

double BoundaryCurve::curvature_radius_at_normal(double psi) const {
  return 1.0 / curvature(param_at_normal(psi));
}

double BoundaryCurve::area_integral(double s0, double s1) const {
  if (s1 < s0) throw Error("area_integral: s1 < s0");
  const int n = samples();
  const double h = step();
  auto integrand = [&](double s) {
    const CurvePoint p = eval(s);
    return p.position.x() * std::sin(p.phi) - p.position.y() * std::cos(p.phi);
  };
  auto cum = [&](double s) {  // cumulative over [0, s) with period lifting
    const double k = std::floor(s / length_);
    const double sw = s - k * length_;
    double u;
    const int i = cell_of(sw, u);
    const int j = (i + 1) % n;
    const double next = (j == 0) ? area_total_ : area_cum_[j];
    const double si = i * h;
    return k * area_total_ +
           hermite(area_cum_[i], integrand(si), next, integrand(si + h), h, u);
  };
  return cum(s1) - cum(s0);
}

double BoundaryCurve::param_at_position_angle(double beta) const {
  const int n = samples();
  const double b0 = pos_angle_[0];
  const double target = b0 + wrap(beta - b0, kTwoPi);
  int lo = 0, hi = n;
  auto node_beta = [&](int i) {
    return i == n ? pos_angle_[0] + kTwoPi : pos_angle_[i];
  };
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (node_beta(mid) <= target)
      lo = mid;
    else
      hi = mid;
  }
  // bisection inside the cell; the position angle spans < pi per cell
  double sa = step() * lo, sb = step() * (lo + 1);
  // symmetric wrap: the angle offset within a cell is far below pi
  auto rel = [&](double s) {
    const Vec2 p = position(s);
    return wrap(std::atan2(p.y(), p.x()) - target + kPi, kTwoPi) - kPi;
  };
  double fa = rel(sa);
  for (int it = 0; it < 60; ++it) {
    const double sm = 0.5 * (sa + sb);
    const double fm = rel(sm);
    if ((fa <= 0.0) == (fm <= 0.0)) {
      sa = sm;
      fa = fm;
    } else {
      sb = sm;
    }
    if (sb - sa < 1e-15 * length_) break;
  }
  return wrap(0.5 * (sa + sb), length_);
}

double BoundaryCurve::gauge(const Vec2& v) const {
  const double r = v.norm();
  if (r == 0.0) return 0.0;
  const double s = param_at_position_angle(std::atan2(v.y(), v.x()));
  return r / position(s).norm();
}

CurvatureProfile BoundaryCurve::extract_profile() const {
  CurvatureProfile p;
  p.kappa = kappa_;
  p.length = length_;
  return p;
}

bool BoundaryCurve::is_circle(double tol) const {
  const double k0 = kappa_.mean();
  return (kappa_ - k0).abs().maxCoeff() <= tol * k0;
}

void BoundaryCurve::write_csv(std::ostream& out) const {
  out << "s,x,y,phi,kappa\n";
  for (int i = 0; i < samples(); ++i)
    out << fmt12(i * step()) << "," << fmt12(x_[i]) << "," << fmt12(y_[i]) << ","
        << fmt12(phi_[i]) << "," << fmt12(kappa_[i]) << "\n";
}

SymmetricDisk::SymmetricDisk(BoundaryCurve curve, double symmetry_tol) {
  const double L = curve.length();
  const int checks = 64;
  for (int i = 0; i < checks; ++i) {
    const double s = L * i / checks;
    const Vec2 r = curve.position(s) + curve.position(s + L / 2.0);
    if (r.norm() > symmetry_tol * L)
      throw Error("SymmetricDisk: boundary is not origin-symmetric (residual " +
                  fmt12(r.norm()) + ")");
  }
  is_circle_ = curve.is_circle();
  if (is_circle_) circle_radius_ = 1.0 / curve.extract_profile().kappa.mean();
  curve_ = std::make_shared<const BoundaryCurve>(std::move(curve));
}

SymmetricDisk SymmetricDisk::circle(double radius, int n) {
  return SymmetricDisk(BoundaryCurve::reconstruct(CurvatureProfile::circle(radius, n)));
}

SymmetricDisk SymmetricDisk::support_harmonic(double e, int n, double scale) {
  return SymmetricDisk(
      BoundaryCurve::reconstruct(CurvatureProfile::support_harmonic(e, n, scale)));
}

}  // namespace spindle
