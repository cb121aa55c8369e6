#include "fwrta/sim/export.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <thread>

#include "json.hpp"

namespace fwrta::sim {

ExportFormat parse_export_format(const std::string& name) {
  if (name == "csv") return ExportFormat::Csv;
  if (name == "json") return ExportFormat::Json;
  if (name == "svg") return ExportFormat::Svg;
  throw ScenarioError("unknown export format '" + name + "' (expected csv, json or svg)");
}

const char* extension(ExportFormat format) {
  switch (format) {
    case ExportFormat::Csv: return "csv";
    case ExportFormat::Json: return "json";
    case ExportFormat::Svg: return "svg";
  }
  return "dat";
}

namespace {

// Angle in (-pi, pi].
double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::remainder(a, two_pi);
  if (w <= -std::numbers::pi) w += two_pi;
  return w;
}

}  // namespace

std::string csv_header(std::size_t num_constraints) {
  std::string h = "t,n,e,d,phi,theta,psi,V_T,A_T_d,P_d,Q_d,A_T,P,Q,h_p";
  for (std::size_t i = 1; i <= num_constraints; ++i) h += fmt::format(",h_{}", i);
  h += ",h_mode,intervening";
  return h;
}

void write_csv(std::ostream& out, const TrajectoryLog& log) {
  out << csv_header(log.num_constraints) << '\n';
  fmt::memory_buffer buf;
  for (const StepRecord& r : log.records) {
    buf.clear();
    // `{}` is the shortest representation that round-trips, so output is exact and stable.
    fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", r.t,
                   r.x.n, r.x.e, r.x.d, wrap_angle(r.x.phi), wrap_angle(r.x.theta),
                   wrap_angle(r.x.psi), r.x.V_T, r.u_d.A_T, r.u_d.P, r.u_d.Q, r.u.A_T, r.u.P,
                   r.u.Q, r.h_p);
    for (std::size_t i = 0; i < log.num_constraints; ++i) {
      const double h = i < r.h_members.size() ? r.h_members[i]
                                              : std::numeric_limits<double>::quiet_NaN();
      fmt::format_to(std::back_inserter(buf), ",{}", h);
    }
    fmt::format_to(std::back_inserter(buf), ",{},{}\n", r.h_mode, r.intervening ? 1 : 0);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

namespace {

nlohmann::json metrics_json(const Metrics& m) {
  return {
      {"min_h_p", m.min_h_p},
      {"min_h_members", m.min_h_members},
      {"min_h_mode", m.min_h_mode},
      {"intervention_duration", m.intervention_duration},
      {"max_abs_A_T", m.max_abs_A_T},
      {"max_abs_P", m.max_abs_P},
      {"max_abs_Q", m.max_abs_Q},
      {"final_position_error", m.final_position_error},
      {"final_time", m.final_time},
      {"final_speed", m.final_speed},
      {"min_speed", m.min_speed},
      {"max_abs_down", m.max_abs_down},
      {"max_roll_deviation", m.max_roll_deviation},
      {"p_transparent", m.p_transparent},
      {"warning_count", m.warning_count},
      {"aborted", m.aborted},
      {"steps", m.steps},
  };
}

}  // namespace

void write_json(std::ostream& out, const Scenario& scenario, const TrajectoryLog& log,
                const Metrics& metrics) {
  using nlohmann::json;
  json records = json::array();
  for (const StepRecord& r : log.records) {
    records.push_back({
        {"t", r.t},
        {"x",
         {{"n", r.x.n},
          {"e", r.x.e},
          {"d", r.x.d},
          {"phi", wrap_angle(r.x.phi)},
          {"theta", wrap_angle(r.x.theta)},
          {"psi", wrap_angle(r.x.psi)},
          {"V_T", r.x.V_T}}},
        {"u_d", {{"A_T", r.u_d.A_T}, {"P", r.u_d.P}, {"Q", r.u_d.Q}}},
        {"u", {{"A_T", r.u.A_T}, {"P", r.u.P}, {"Q", r.u.Q}}},
        {"h_p", r.h_p},
        {"h_members", r.h_members},
        {"h_mode", r.h_mode},
        {"intervening", r.intervening},
    });
  }
  json warnings = json::array();
  for (const LogWarning& w : log.warnings) warnings.push_back({{"t", w.t}, {"message", w.message}});

  json doc = {
      {"schema_version", kScenarioSchemaVersion},
      {"scenario", scenario.name},
      {"mode", to_string(log.mode)},
      {"dt", log.dt},
      {"horizon", scenario.sim.horizon},
      {"num_constraints", log.num_constraints},
      {"aborted", log.aborted},
      {"abort_reason", log.abort_reason},
      {"warnings", warnings},
      {"metrics", metrics_json(metrics)},
      {"records", records},
  };
  out << doc.dump(1) << '\n';
}

namespace {

struct Box {
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity();
  double y1 = -std::numeric_limits<double>::infinity();

  void add(double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  void pad(double frac) {
    if (!(x1 >= x0)) *this = {0.0, 1.0, 0.0, 1.0};
    const double wx = std::max(x1 - x0, 1e-9), wy = std::max(y1 - y0, 1e-9);
    x0 -= frac * wx;
    x1 += frac * wx;
    y0 -= frac * wy;
    y1 += frac * wy;
  }
};

// Maps data coordinates into a pixel rectangle (y grows upwards in data space).
struct Frame {
  Box box;
  double left, top, width, height;

  double px(double x) const { return left + (x - box.x0) / (box.x1 - box.x0) * width; }
  double py(double y) const { return top + height - (y - box.y0) / (box.y1 - box.y0) * height; }
};

std::string polyline(const Frame& f, const std::vector<std::pair<double, double>>& pts,
                     const char* color, const char* extra = "") {
  std::string s = fmt::format(R"(<polyline fill="none" stroke="{}" stroke-width="1.5" {} points=")",
                              color, extra);
  // Decimate long traces; one point per pixel column is plenty.
  const std::size_t stride = std::max<std::size_t>(1, pts.size() / 2000);
  for (std::size_t i = 0; i < pts.size(); i += stride) {
    if (!std::isfinite(pts[i].first) || !std::isfinite(pts[i].second)) continue;
    s += fmt::format("{:.2f},{:.2f} ", f.px(pts[i].first), f.py(pts[i].second));
  }
  if (!pts.empty() && (pts.size() - 1) % stride != 0) {
    s += fmt::format("{:.2f},{:.2f}", f.px(pts.back().first), f.py(pts.back().second));
  }
  s += "\"/>\n";
  return s;
}

std::string axes(const Frame& f, const std::string& title, const std::string& xlabel,
                 const std::string& ylabel) {
  std::string s;
  s += fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="white" stroke="#444"/>)",
                   f.left, f.top, f.width, f.height);
  s += '\n';
  s += fmt::format(R"(<text x="{}" y="{}" font-size="14" font-weight="bold">{}</text>)", f.left,
                   f.top - 8, title);
  s += '\n';
  s += fmt::format(R"(<text x="{}" y="{}" font-size="11" text-anchor="middle">{}</text>)",
                   f.left + f.width / 2, f.top + f.height + 30, xlabel);
  s += '\n';
  s += fmt::format(
      R"svg(<text x="{}" y="{}" font-size="11" text-anchor="middle" transform="rotate(-90 {} {})">{}</text>)svg",
      f.left - 45, f.top + f.height / 2, f.left - 45, f.top + f.height / 2, ylabel);
  s += '\n';
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.box.x0 + (f.box.x1 - f.box.x0) * i / 4.0;
    const double yv = f.box.y0 + (f.box.y1 - f.box.y0) * i / 4.0;
    s += fmt::format(R"(<text x="{:.1f}" y="{:.1f}" font-size="10" text-anchor="middle">{:.4g}</text>)",
                     f.px(xv), f.top + f.height + 14, xv);
    s += fmt::format(R"(<text x="{:.1f}" y="{:.1f}" font-size="10" text-anchor="end">{:.4g}</text>)",
                     f.left - 4, f.py(yv) + 3, yv);
    s += '\n';
  }
  return s;
}

std::string legend(const Frame& f, const std::vector<std::pair<std::string, const char*>>& items) {
  std::string s;
  double y = f.top + 14;
  for (const auto& [label, color] : items) {
    s += fmt::format(
        R"(<line x1="{0:.1f}" y1="{1:.1f}" x2="{2:.1f}" y2="{1:.1f}" stroke="{3}" stroke-width="2"/><text x="{4:.1f}" y="{5:.1f}" font-size="10">{6}</text>)",
        f.left + f.width - 120, y, f.left + f.width - 100, color, f.left + f.width - 95, y + 3,
        label);
    s += '\n';
    y += 14;
  }
  return s;
}

constexpr const char* kPalette[] = {"#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2",
                                    "#7f7f7f", "#bcbd22", "#17becf"};

const char* palette(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

}  // namespace

void write_svg(std::ostream& out, const Scenario& scenario, const TrajectoryLog& log) {
  const double W = 900, panel_w = 760, left = 100;
  std::string body;

  // Ground track: east to the right, north up.
  std::vector<std::pair<double, double>> track;
  Box box;
  for (const StepRecord& r : log.records) {
    track.emplace_back(r.x.e, r.x.n);
    box.add(r.x.e, r.x.n);
  }
  std::vector<std::vector<std::pair<double, double>>> obstacle_paths;
  for (const Constraint& c : scenario.constraints.members) {
    if (const auto* obs = std::get_if<MovingObstacle>(&c)) {
      std::vector<std::pair<double, double>> path;
      for (const StepRecord& r : log.records) {
        const Vec3d p = obs->position_at(r.t);
        path.emplace_back(p(1), p(0));
        box.add(p(1), p(0));
      }
      obstacle_paths.push_back(std::move(path));
    }
  }
  box.pad(0.08);
  // Equal scale on both axes.
  const double span = std::max(box.x1 - box.x0, box.y1 - box.y0);
  const double cx = 0.5 * (box.x0 + box.x1), cy = 0.5 * (box.y0 + box.y1);
  box = {cx - span / 2, cx + span / 2, cy - span / 2, cy + span / 2};
  const Frame ground{box, left, 40, panel_w, panel_w};

  body += axes(ground, fmt::format("{}: ground track ({} RTA)", scenario.name,
                                   to_string(scenario.mode)),
               "east e [m]", "north n [m]");
  body += fmt::format(
      R"(<clipPath id="ground"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath>)",
      ground.left, ground.top, ground.width, ground.height);
  body += "\n<g clip-path=\"url(#ground)\">\n";
  std::size_t fence_index = 0;
  for (const Constraint& c : scenario.constraints.members) {
    const auto* plane = std::get_if<GeofencePlane>(&c);
    if (!plane) continue;
    // Trace of the plane in the horizontal plane, in (e, n) coordinates.
    const double nn = plane->normal(0), ne = plane->normal(1);
    const double h = std::hypot(nn, ne);
    if (h < 1e-12) continue;
    const double de = -nn / h, dn = ne / h;
    const double L = 4.0 * span;
    for (double offset : {0.0, plane->margin}) {
      const double pe = plane->point(1) + offset * ne / h, pn = plane->point(0) + offset * nn / h;
      body += fmt::format(
          R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}" stroke="#1f77b4" stroke-width="{}" {}/>)",
          ground.px(pe - L * de), ground.py(pn - L * dn), ground.px(pe + L * de),
          ground.py(pn + L * dn), offset == 0.0 ? 2 : 1,
          offset == 0.0 ? "" : R"(stroke-dasharray="6,4")");
      body += '\n';
    }
    ++fence_index;
  }
  for (const auto& path : obstacle_paths) {
    body += polyline(ground, path, "#ff7f0e", R"(stroke-dasharray="4,3")");
  }
  body += polyline(ground, track, "#000000");
  body += "</g>\n";
  std::vector<std::pair<std::string, const char*>> ground_legend{{"aircraft", "#000000"}};
  if (!obstacle_paths.empty()) ground_legend.emplace_back("intruder", "#ff7f0e");
  if (fence_index > 0) ground_legend.emplace_back("geofence", "#1f77b4");
  body += legend(ground, ground_legend);

  // Barrier traces.
  const double t_end = log.records.empty() ? 1.0 : std::max(log.records.back().t, 1e-9);
  Box hbox;
  hbox.add(0.0, 0.0);
  std::vector<std::vector<std::pair<double, double>>> h_traces(log.num_constraints + 2);
  for (const StepRecord& r : log.records) {
    h_traces[0].emplace_back(r.t, r.h_p);
    h_traces[1].emplace_back(r.t, r.h_mode);
    for (std::size_t i = 0; i < r.h_members.size() && i < log.num_constraints; ++i) {
      h_traces[i + 2].emplace_back(r.t, r.h_members[i]);
    }
  }
  for (const auto& tr : h_traces)
    for (const auto& [t, h] : tr) hbox.add(t, h);
  hbox.x0 = 0.0;
  hbox.x1 = t_end;
  {
    const double wy = std::max(hbox.y1 - hbox.y0, 1e-9);
    hbox.y0 -= 0.05 * wy;
    hbox.y1 += 0.05 * wy;
  }
  const double h_top = ground.top + ground.height + 80;
  const Frame hframe{hbox, left, h_top, panel_w, 260};
  body += axes(hframe, "barriers", "t [s]", "h");
  body += fmt::format(
      R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}" stroke="#aaa" stroke-dasharray="2,2"/>)",
      hframe.px(0.0), hframe.py(0.0), hframe.px(t_end), hframe.py(0.0));
  body += '\n';
  std::vector<std::pair<std::string, const char*>> h_legend{{"h_p", "#000000"},
                                                            {"h_mode", "#1f77b4"}};
  body += polyline(hframe, h_traces[0], "#000000");
  body += polyline(hframe, h_traces[1], "#1f77b4");
  for (std::size_t i = 0; i < log.num_constraints; ++i) {
    body += polyline(hframe, h_traces[i + 2], palette(i), R"(stroke-dasharray="5,3")");
    h_legend.emplace_back(fmt::format("h_{}", i + 1), palette(i));
  }
  body += legend(hframe, h_legend);

  // Inputs, each normalised by its own peak so the three channels share one axis.
  const double u_top = hframe.top + hframe.height + 80;
  Box ubox{0.0, t_end, -1.1, 1.1};
  const Frame uframe{ubox, left, u_top, panel_w, 260};
  body += axes(uframe, "inputs (normalised by peak |u_d|, |u|)", "t [s]", "u / max|u|");
  const char* names[] = {"A_T", "P", "Q"};
  const char* colors[] = {"#d62728", "#2ca02c", "#9467bd"};
  std::vector<std::pair<std::string, const char*>> u_legend;
  for (int ch = 0; ch < 3; ++ch) {
    double peak = 0.0;
    for (const StepRecord& r : log.records) {
      peak = std::max({peak, std::abs(r.u.to_vector()(ch)), std::abs(r.u_d.to_vector()(ch))});
    }
    if (!(peak > 0.0) || !std::isfinite(peak)) peak = 1.0;
    std::vector<std::pair<double, double>> u_pts, ud_pts;
    for (const StepRecord& r : log.records) {
      u_pts.emplace_back(r.t, r.u.to_vector()(ch) / peak);
      ud_pts.emplace_back(r.t, r.u_d.to_vector()(ch) / peak);
    }
    body += polyline(uframe, ud_pts, colors[ch], R"(stroke-dasharray="3,3" opacity="0.6")");
    body += polyline(uframe, u_pts, colors[ch]);
    u_legend.emplace_back(fmt::format("{} (peak {:.3g})", names[ch], peak), colors[ch]);
  }
  body += legend(uframe, u_legend);

  const double H = uframe.top + uframe.height + 60;
  out << fmt::format(
      R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}" font-family="sans-serif">)",
      W, H, W, H);
  out << "\n<rect width=\"100%\" height=\"100%\" fill=\"#fafafa\"/>\n" << body << "</svg>\n";
}

std::filesystem::path export_log(const std::filesystem::path& dir, ExportFormat format,
                                 const Scenario& scenario, const TrajectoryLog& log,
                                 const Metrics& metrics) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw ScenarioError(fmt::format("{}: cannot create output directory: {}", dir.string(),
                                    ec.message()));
  }
  const std::filesystem::path path = dir / (scenario.name + "." + extension(format));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ScenarioError(fmt::format("{}: cannot open for writing", path.string()));
  switch (format) {
    case ExportFormat::Csv: write_csv(out, log); break;
    case ExportFormat::Json: write_json(out, scenario, log, metrics); break;
    case ExportFormat::Svg: write_svg(out, scenario, log); break;
  }
  out.flush();
  if (!out) throw ScenarioError(fmt::format("{}: write failed", path.string()));
  return path;
}

std::vector<SweepRow> sweep(const std::filesystem::path& path, const std::string& param,
                            double min, double max, int steps, unsigned threads) {
  if (steps < 1) throw ScenarioError("sweep needs at least one step");
  std::vector<SweepRow> rows(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    rows[i].value = steps == 1 ? min : min + (max - min) * i / (steps - 1);
  }
  // Fail fast on a bad file or parameter path before spawning work.
  (void)load_scenario(path, {{param, rows[0].value}});

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      SweepRow& row = rows[i];
      try {
        const Scenario s = load_scenario(path, {{param, row.value}});
        const TrajectoryLog log = integrate(s);
        row.metrics = compute_metrics(s, log);
        row.passed = check_metrics(s, row.metrics).passed();
        if (log.aborted) row.error = log.abort_reason;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(steps)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::string& param,
                     const std::vector<SweepRow>& rows) {
  out << param
      << ",min_h_p,min_h_mode,intervention_duration,max_abs_A_T,max_abs_P,max_abs_Q,"
         "final_position_error,final_speed,warnings,aborted,passed,error\n";
  for (const SweepRow& r : rows) {
    const Metrics& m = r.metrics;
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.value, m.min_h_p, m.min_h_mode,
                       m.intervention_duration, m.max_abs_A_T, m.max_abs_P, m.max_abs_Q,
                       m.final_position_error, m.final_speed, m.warning_count, m.aborted ? 1 : 0,
                       r.passed ? 1 : 0, err);
  }
}

}  // namespace fwrta::sim
