#include "spindle/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "spindle/construct.hpp"
#include "spindle/dowker_lab.hpp"
#include "spindle/metrics.hpp"
#include "spindle/variation.hpp"

namespace spindle {

namespace {

using nlohmann::json;

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::vector<Vec2> parse_points(const std::string& text) {
  std::vector<Vec2> out;
  std::stringstream ss(text);
  std::string pair;
  while (std::getline(ss, pair, ';')) {
    const auto nums = parse_list(pair);
    if (nums.size() != 2)
      throw Error("expected 'x,y' pairs separated by ';', got '" + pair + "'");
    out.emplace_back(nums[0], nums[1]);
  }
  return out;
}

CounterexampleSpec counterexample_spec(const ExperimentConfig& cfg,
                                       const std::string& prefix) {
  CounterexampleSpec spec;
  spec.kappa0 = cfg.get_num(prefix + ".kappa0", spec.kappa0);
  spec.lambda = cfg.get_num(prefix + ".lambda", spec.lambda);
  spec.s0 = cfg.get_num(prefix + ".s0", spec.s0);
  spec.delta = cfg.get_num(prefix + ".delta", spec.delta);
  spec.eps = cfg.get_num(prefix + ".eps", spec.eps);
  spec.base_radius = cfg.get_num(prefix + ".base_radius", spec.base_radius);
  spec.allow_control = cfg.get(prefix + ".allow_control", "false") == "true";
  spec.samples = cfg.get_int(prefix + ".samples", spec.samples);
  return spec;
}

SymmetricDisk disk_from_config(const ExperimentConfig& cfg,
                               const std::string& prefix) {
  const std::string kind = cfg.get(prefix + ".kind", "circle");
  const int samples = cfg.get_int(prefix + ".samples", kDefaultSamples);
  if (kind == "circle")
    return SymmetricDisk::circle(cfg.get_num(prefix + ".radius", 1.0), samples);
  if (kind == "harmonic")
    return SymmetricDisk::support_harmonic(cfg.get_num(prefix + ".e", 0.1),
                                           samples,
                                           cfg.get_num(prefix + ".scale", 1.0));
  if (kind == "counterexample")
    return build_counterexample_disk(counterexample_spec(cfg, prefix));
  if (kind == "profile") {
    std::ifstream in(cfg.require(prefix + ".file"));
    if (!in) throw Error("cannot open profile file " + cfg.require(prefix + ".file"));
    return SymmetricDisk(
        BoundaryCurve::reconstruct(CurvatureProfile::read_csv(in)));
  }
  throw Error("unknown disk kind '" + kind + "' under [" + prefix + "]");
}

CPolygon body_from_config(const ExperimentConfig& cfg, const DiskRef& C) {
  const std::string kind = cfg.get("body.kind", "full");
  if (kind == "full") return CPolygon::full_disk(C);
  if (kind == "lens") return make_lens(C, cfg.get_num("body.offset", -1.0));
  if (kind == "triangle")
    return make_triangle_body(C, cfg.get_num("body.side", 0.8));
  if (kind == "translates") {
    auto poly =
        intersect_translates(C, parse_points(cfg.require("body.translates")));
    if (!poly) throw Error("body translates have empty intersection");
    return *poly;
  }
  if (kind == "disk") {
    ExperimentConfig sub = cfg;
    auto d = make_disk_ref(disk_from_config(sub, "body"));
    return CPolygon::full_disk(d);
  }
  throw Error("unknown body kind '" + kind + "'");
}

json config_json(const ExperimentConfig& cfg) {
  json values = json::object();
  for (const auto& [k, v] : cfg.values) values[k] = v;
  // out_dir is deliberately not embedded: reports must be byte-identical
  // regardless of where they are written
  return json{{"command", cfg.command},
              {"seed", cfg.seed},
              {"svg", cfg.svg},
              {"values", values}};
}

struct Artifacts {
  std::filesystem::path dir;
  std::string stem;

  std::ofstream csv() const { return open(stem + ".csv"); }
  std::ofstream svg() const { return open(stem + ".svg"); }

  void write_json(json j) const {
    auto out = open(stem + ".json");
    out << j.dump(2) << "\n";
  }

 private:
  std::ofstream open(const std::string& name) const {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / name).string());
    return out;
  }
};

/// Minimal SVG writer: polylines in a y-flipped viewBox around the data.
struct SvgWriter {
  struct Path {
    std::vector<Vec2> pts;
    std::string stroke;
    double width;
    bool closed;
  };
  std::vector<Path> paths;
  double lo_x = 1e300, lo_y = 1e300, hi_x = -1e300, hi_y = -1e300;

  void add(std::vector<Vec2> pts, const std::string& stroke, double width,
           bool closed) {
    for (const auto& p : pts) {
      lo_x = std::min(lo_x, p.x());
      hi_x = std::max(hi_x, p.x());
      lo_y = std::min(lo_y, p.y());
      hi_y = std::max(hi_y, p.y());
    }
    paths.push_back({std::move(pts), stroke, width, closed});
  }

  void add_curve(const BoundaryCurve& c, const Vec2& offset,
                 const std::string& stroke, double width, int n = 512) {
    std::vector<Vec2> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i)
      pts.push_back(offset + c.position(c.length() * i / n));
    add(std::move(pts), stroke, width, true);
  }

  void add_polygon_boundary(const CPolygon& K, const std::string& stroke,
                            double width, int n = 512) {
    std::vector<Vec2> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i)
      pts.push_back(K.eval(K.perimeter() * i / n).position);
    add(std::move(pts), stroke, width, true);
  }

  void write(std::ostream& out) const {
    const double pad = 0.05 * std::max(hi_x - lo_x, hi_y - lo_y) + 1e-6;
    const double w = hi_x - lo_x + 2 * pad, h = hi_y - lo_y + 2 * pad;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
                  "height=\"640\" viewBox=\"%.6f %.6f %.6f %.6f\">\n",
                  lo_x - pad, -(hi_y + pad), w, h);
    out << buf;
    for (const auto& p : paths) {
      out << (p.closed ? "<polygon" : "<polyline") << " fill=\"none\" stroke=\""
          << p.stroke << "\" stroke-width=\"" << p.width * w / 640.0
          << "\" points=\"";
      for (const auto& v : p.pts) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f ", v.x(), -v.y());
        out << buf;
      }
      out << "\"/>\n";
    }
    out << "</svg>\n";
  }
};

std::pair<double, double> sample_admissible(const CPolygon& K, Rng& rng) {
  const double P = K.perimeter();
  for (int tries = 0; tries < 4000; ++tries) {
    const double s = rng.uniform(0.0, P);
    const double t = s + rng.uniform(0.05 * P, 0.45 * P);
    if (K.turning(s, t) > kPi - 0.05) continue;
    if (K.corner_distance(s) < 1e-3 || K.corner_distance(t) < 1e-3) continue;
    if (K.corner_distance(0.5 * (s + t)) < 0.0) continue;
    return {s, t};
  }
  throw Error("no admissible (s,t) sample found on this body");
}

/// Relative error with a unit floor: the compared quantities are O(1)
/// direction derivatives, and configurations where a boundary arc of K lies
/// on a translate of C make several of them exactly zero, where a pure
/// relative error would divide noise by noise.
double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1.0);
}

// ---------------------------------------------------------------- commands

int run_reconstruct(const ExperimentConfig& cfg, const Artifacts& art) {
  const SymmetricDisk disk = disk_from_config(cfg, "disk");
  const BoundaryCurve& c = disk.boundary();
  {
    auto out = art.csv();
    c.write_csv(out);
  }
  json j = {{"version", kVersion},
            {"config", config_json(cfg)},
            {"length", c.length()},
            {"area", c.area()},
            {"closure_residual", c.closure_residual()},
            {"min_kappa", c.min_kappa()},
            {"max_kappa", c.max_kappa()},
            {"samples", c.samples()}};
  art.write_json(j);
  if (cfg.svg) {
    SvgWriter svg;
    svg.add_curve(c, Vec2::Zero(), "black", 2.0);
    auto out = art.svg();
    svg.write(out);
  }
  return 0;
}

int run_dowker(const ExperimentConfig& cfg, const Artifacts& art) {
  auto C = make_disk_ref(disk_from_config(cfg, "generator"));
  const CPolygon K = body_from_config(cfg, C);
  const int n_min = cfg.get_int("dowker.n_min", 4);
  const int n_max = cfg.get_int("dowker.n_max", 8);
  const int M = cfg.get_int("dowker.grid", 2048);
  const DowkerReport rep = dowker_report(K, C, n_min, n_max, M);

  auto out = art.csv();
  out << "n,a_n,second_diff\n";
  json entries = json::object();
  for (const auto& [n, e] : rep.entries) {
    out << n << "," << fmt12(e.area) << ",";
    if (rep.second_differences.count(n))
      out << fmt12(rep.second_differences.at(n));
    out << "\n";
    json je = {{"area", e.area},
               {"grid", e.grid},
               {"refine_sweeps", e.refine_sweeps},
               {"sigmas", e.sigmas}};
    if (rep.second_differences.count(n))
      je["second_diff"] = rep.second_differences.at(n);
    entries[std::to_string(n)] = je;
  }
  json j = {{"version", kVersion},
            {"config", config_json(cfg)},
            {"area_K", K.area()},
            {"entries", entries}};
  art.write_json(j);

  if (cfg.svg) {
    SvgWriter svg;
    svg.add_polygon_boundary(K, "black", 2.0);
    for (const auto& [n, e] : rep.entries) {
      std::vector<Vec2> verts;
      for (double sig : e.sigmas) verts.push_back(K.eval(sig).position);
      svg.add(std::move(verts), "crimson", 1.0, true);
    }
    auto sout = art.svg();
    svg.write(sout);
  }
  return 0;
}

int run_quadrangle(const ExperimentConfig& cfg, const Artifacts& art) {
  auto C = make_disk_ref(disk_from_config(cfg, "generator"));
  const CPolygon K = body_from_config(cfg, C);
  const int samples = cfg.get_int("quadrangle.samples", 1000);
  const auto violations = quadrangle_sweep(K, C, samples, cfg.seed);

  auto out = art.csv();
  out << "s1,s2,s3,s4,lhs,rhs,margin\n";
  json list = json::array();
  for (const auto& v : violations) {
    out << fmt12(v.s1) << "," << fmt12(v.s2) << "," << fmt12(v.s3) << ","
        << fmt12(v.s4) << "," << fmt12(v.lhs) << "," << fmt12(v.rhs) << ","
        << fmt12(v.rhs - v.lhs) << "\n";
    list.push_back({{"s1", v.s1},
                    {"s2", v.s2},
                    {"s3", v.s3},
                    {"s4", v.s4},
                    {"lhs", v.lhs},
                    {"rhs", v.rhs},
                    {"turning", v.turning}});
  }
  json j = {{"version", kVersion},
            {"config", config_json(cfg)},
            {"samples", samples},
            {"violation_count", violations.size()},
            {"violations", list}};
  art.write_json(j);

  if (cfg.svg) {
    SvgWriter svg;
    svg.add_polygon_boundary(K, "black", 2.0);
    for (const auto& v : violations) {
      std::vector<Vec2> pts;
      for (double s : {v.s1, v.s2, v.s3, v.s4})
        pts.push_back(K.eval(s).position);
      svg.add(std::move(pts), "crimson", 1.5, true);
    }
    auto sout = art.svg();
    svg.write(sout);
  }
  return 0;
}

int run_derivative_check(const ExperimentConfig& cfg, const Artifacts& art) {
  auto C = make_disk_ref(disk_from_config(cfg, "generator"));
  const CPolygon K = body_from_config(cfg, C);
  const int count = cfg.get_int("derivative.count", 50);
  Rng rng(cfg.seed, "derivative-check");

  auto out = art.csv();
  out << "s,t,analytic,finite_diff,rel_err,quantity\n";
  std::map<std::string, double> worst;
  auto emit = [&](double s, double t, const std::string& name, double analytic,
                  double fd) {
    const double err = rel_err(analytic, fd);
    worst[name] = std::max(worst[name], err);
    out << fmt12(s) << "," << fmt12(t) << "," << fmt12(analytic) << ","
        << fmt12(fd) << "," << fmt12(err) << "," << name << "\n";
  };

  const double L = C->length();
  for (int i = 0; i < count; ++i) {
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
    emit(s, t, "dS_ds", d.dS_ds, (S_of(s + h, t) - S_of(s - h, t)) / (2 * h));
    emit(s, t, "dS_dt", d.dS_dt, (S_of(s, t + h) - S_of(s, t - h)) / (2 * h));
    emit(s, t, "dT_ds", d.dT_ds, (T_of(s + h, t) - T_of(s - h, t)) / (2 * h));
    emit(s, t, "dT_dt", d.dT_dt, (T_of(s, t + h) - T_of(s, t - h)) / (2 * h));

    const double h2 = 1e-4;
    const double fd_mixed =
        (S_of(s + h2, t + h2) - S_of(s + h2, t - h2) - S_of(s - h2, t + h2) +
         S_of(s - h2, t - h2)) /
        (4 * h2 * h2);
    emit(s, t, "dsdt_S", mixed_partial_S(f), fd_mixed);

    auto abar = [&](double a, double b) { return -region_area(K, C, a, b); };
    auto stencil = [&](double hh) {
      return (abar(s + hh, t + hh) - abar(s + hh, t - hh) -
              abar(s - hh, t + hh) + abar(s - hh, t - hh)) /
             (4 * hh * hh);
    };
    const double ha = 1e-4 * K.perimeter();
    const double rich = (4.0 * stencil(0.5 * ha) - stencil(ha)) / 3.0;
    emit(s, t, "dsdt_A", mixed_partial_A(f), rich);
  }

  json jw = json::object();
  for (const auto& [k, v] : worst) jw[k] = v;
  json j = {{"version", kVersion},
            {"config", config_json(cfg)},
            {"count", count},
            {"max_rel_err", jw}};
  art.write_json(j);
  return 0;
}

int run_pm_distance(const ExperimentConfig& cfg, const Artifacts& art) {
  const SymmetricDisk A = disk_from_config(cfg, "disk");
  const SymmetricDisk B = disk_from_config(cfg, "disk2");
  const int depth = cfg.get_int("pm.depth", 12);
  const auto pm = pm_distance_smooth(A, B);
  const auto levels = pm_distance_dyadic(A, B, depth);
  const double dh = hausdorff_distance(A, B);

  auto out = art.csv();
  out << "n,d_H,d_PM\n";
  out << "1," << fmt12(dh) << ","
      << (pm.infinite ? std::string("inf") : fmt12(pm.value)) << "\n";

  json witness = json::array();
  for (const auto& a : pm.witness.arcs)
    witness.push_back({{"start", a.start}, {"end", a.end}});
  json j = {{"version", kVersion},
            {"config", config_json(cfg)},
            {"d_hausdorff", dh},
            {"d_pm", pm.value},
            {"pm_infinite", pm.infinite},
            {"witness", witness},
            {"dyadic_lower_bounds", levels}};
  art.write_json(j);
  return 0;
}

int run_refinement_demo(const ExperimentConfig& cfg, const Artifacts& art) {
  const int n_max = cfg.get_int("refinement.n_max", 1000);
  const auto rows = refinement_demo(n_max);

  auto out = art.csv();
  out << "n,d_H,d_PM\n";
  json list = json::array();
  for (const auto& r : rows) {
    out << r.n << "," << fmt12(r.d_hausdorff) << ","
        << (r.pm_infinite ? "inf" : "0") << "\n";
    list.push_back({{"n", r.n},
                    {"d_hausdorff", r.d_hausdorff},
                    {"pm_infinite", r.pm_infinite},
                    {"atom_mass", r.atom_mass},
                    {"witness_angle", r.witness_angle}});
  }
  json j = {{"version", kVersion},
            {"config", config_json(cfg)},
            {"rows", list}};
  art.write_json(j);
  return 0;
}

int run_counterexample(const ExperimentConfig& cfg, const Artifacts& art) {
  const CounterexampleSpec spec = counterexample_spec(cfg, "counterexample");
  const SymmetricDisk disk = build_counterexample_disk(spec);
  std::vector<double> grid =
      parse_list(cfg.get("counterexample.sbar_grid", "0.003,0.005,0.01"));
  const ViolationReport rep = verify_violation(disk, spec, grid);
  const JunctionResiduals res = junction_residuals(spec);

  auto out = art.csv();
  out << "s_bar,analytic,ratio,predicted\n";
  json points = json::array();
  for (const auto& p : rep.points) {
    out << fmt12(p.sbar) << "," << fmt12(p.analytic) << "," << fmt12(p.ratio)
        << "," << fmt12(rep.predicted) << "\n";
    points.push_back({{"sbar", p.sbar},
                      {"analytic", p.analytic},
                      {"ratio", p.ratio},
                      {"ratio_linear", p.ratio_linear},
                      {"frame_ok", p.frame_ok},
                      {"error", p.error}});
  }
  const QuadrangleWitness& w = rep.witness;
  json j = {{"version", kVersion},
            {"config", config_json(cfg)},
            {"predicted_quartic_coefficient", rep.predicted},
            {"predicted_linear_coefficient",
             mixed_partial_leading_coefficient(spec.kappa0, spec.lambda)},
            {"junction_residuals",
             {{"turning", res.turning}, {"pos_x", res.pos_x}, {"pos_y", res.pos_y}}},
            {"points", points},
            {"witness",
             {{"attempted", w.attempted},
              {"violated", w.violated},
              {"stable", w.stable},
              {"sbar", w.sbar},
              {"eta", w.eta},
              {"s", {w.s1, w.s2, w.s3, w.s4}},
              {"lhs", w.lhs},
              {"rhs", w.rhs},
              {"margin", w.margin},
              {"lhs_fine", w.lhs_fine},
              {"rhs_fine", w.rhs_fine},
              {"margin_fine", w.margin_fine},
              {"error", w.error}}}};
  art.write_json(j);

  if (cfg.svg) {
    // radial exaggeration of the deviation from the base circle
    const double ex = cfg.get_num("counterexample.exaggeration", 50.0);
    const BoundaryCurve& c = disk.boundary();
    SvgWriter svg;
    svg.add_curve(SymmetricDisk::circle(spec.base_radius).boundary(),
                  Vec2::Zero(), "gray", 1.0);
    std::vector<Vec2> pts;
    for (int i = 0; i < 1024; ++i) {
      const Vec2 p = c.position(c.length() * i / 1024);
      const double r = p.norm();
      pts.push_back(p / r * (spec.base_radius + ex * (r - spec.base_radius)));
    }
    svg.add(std::move(pts), "crimson", 1.5, true);
    auto sout = art.svg();
    svg.write(sout);
  }
  return 0;
}

}  // namespace

std::string ExperimentConfig::get(const std::string& key,
                                  const std::string& fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

std::string ExperimentConfig::require(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw Error("missing required config key '" + key + "'");
  return it->second;
}

double ExperimentConfig::get_num(const std::string& key, double fallback) const {
  const auto it = values.find(key);
  if (it == values.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw Error("config key '" + key + "': not a number: '" + it->second + "'");
  }
}

int ExperimentConfig::get_int(const std::string& key, int fallback) const {
  const auto it = values.find(key);
  if (it == values.end()) return fallback;
  try {
    std::size_t pos = 0;
    const int v = std::stoi(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw Error("config key '" + key + "': not an integer: '" + it->second + "'");
  }
}

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& name) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw Error(name + ":" + std::to_string(lineno) +
                    ": malformed section header '" + t + "'");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw Error(name + ":" + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(name + ":" + std::to_string(lineno) +
                  ": expected 'key = value', got '" + t + "'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw Error(name + ":" + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw Error(name + ":" + std::to_string(lineno) +
                  ": key '" + key + "' outside any [section]");
    cfg.values[section + "." + key] = value;
  }
  cfg.command = cfg.get("experiment.command", "");
  if (cfg.command.empty())
    throw Error(name + ": missing [experiment] command");
  if (cfg.has("experiment.seed"))
    cfg.seed = std::stoull(cfg.values.at("experiment.seed"));
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

int run_experiment(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  Artifacts art{cfg.out_dir, cfg.command};
  try {
    if (cfg.command == "reconstruct") return run_reconstruct(cfg, art);
    if (cfg.command == "dowker") return run_dowker(cfg, art);
    if (cfg.command == "quadrangle") return run_quadrangle(cfg, art);
    if (cfg.command == "derivative-check") return run_derivative_check(cfg, art);
    if (cfg.command == "pm-distance") return run_pm_distance(cfg, art);
    if (cfg.command == "refinement-demo") return run_refinement_demo(cfg, art);
    if (cfg.command == "counterexample") return run_counterexample(cfg, art);
    throw Error("unknown command '" + cfg.command + "'");
  } catch (const std::exception& e) {
    art.write_json(json{{"version", kVersion},
                        {"config", config_json(cfg)},
                        {"error", e.what()}});
    return 1;
  }
}

}  // namespace spindle
