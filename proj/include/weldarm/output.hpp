#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "weldarm/errors.hpp"
#include "weldarm/sim.hpp"

namespace weldarm {

namespace detail {

inline std::string fmt12e(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

inline std::string fmtg(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Writes to "<path>.tmp" and renames into place once the stream closed fine.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError(tmp.string(), "cannot open for writing");
    os << content;
    if (!os) throw IoError(tmp.string(), "write failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError(path.string(), "rename failed: " + ec.message());
}

// Minimal deterministic line plot.
inline std::string svg_line_plot(const std::vector<double>& xs, const std::vector<double>& ys,
                                 const std::string& title, const std::string& xlabel,
                                 const std::string& ylabel) {
  const int width = 640, height = 420;
  const int ml = 74, mr = 18, mt = 34, mb = 46;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmin = xs.empty() ? 0.0 : *std::min_element(xs.begin(), xs.end());
  double xmax = xs.empty() ? 1.0 : *std::max_element(xs.begin(), xs.end());
  double ymin = ys.empty() ? 0.0 : *std::min_element(ys.begin(), ys.end());
  double ymax = ys.empty() ? 1.0 : *std::max_element(ys.begin(), ys.end());
  if (xmax - xmin < 1e-300) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  const auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  const auto py = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * ph; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
       "\" height=\"" + std::to_string(height) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + std::to_string(width / 2) + "\" y=\"20\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"14\">" + title + "</text>\n";

  const int nticks = 5;
  for (int i = 0; i <= nticks; ++i) {
    const double fx = xmin + (xmax - xmin) * i / nticks;
    const double fy = ymin + (ymax - ymin) * i / nticks;
    const double gx = px(fx), gy = py(fy);
    s += "<line x1=\"" + fmtg(gx) + "\" y1=\"" + fmtg(mt) + "\" x2=\"" + fmtg(gx) + "\" y2=\"" +
         fmtg(mt + ph) + "\" stroke=\"#dddddd\"/>\n";
    s += "<line x1=\"" + fmtg(ml) + "\" y1=\"" + fmtg(gy) + "\" x2=\"" + fmtg(ml + pw) +
         "\" y2=\"" + fmtg(gy) + "\" stroke=\"#dddddd\"/>\n";
    s += "<text x=\"" + fmtg(gx) + "\" y=\"" + fmtg(mt + ph + 16) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + fmtg(fx) +
         "</text>\n";
    s += "<text x=\"" + fmtg(ml - 6) + "\" y=\"" + fmtg(gy + 3) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + fmtg(fy) +
         "</text>\n";
  }
  s += "<rect x=\"" + fmtg(ml) + "\" y=\"" + fmtg(mt) + "\" width=\"" + fmtg(pw) +
       "\" height=\"" + fmtg(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<text x=\"" + std::to_string(width / 2) + "\" y=\"" + std::to_string(height - 10) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + xlabel +
       "</text>\n";
  s += "<text x=\"16\" y=\"" + std::to_string(mt + static_cast<int>(ph) / 2) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
       "transform=\"rotate(-90 16 " + std::to_string(mt + static_cast<int>(ph) / 2) + ")\">" +
       ylabel + "</text>\n";

  s += "<polyline fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ' ';
    s += fmtg(px(xs[i])) + "," + fmtg(py(ys[i]));
  }
  s += "\"/>\n</svg>\n";
  return s;
}

}  // namespace detail

inline std::string trajectory_csv(const std::vector<TrajectorySample>& samples) {
  std::string csv = "t,psi";
  const auto cols = [&](const std::string& base) {
    for (int j = 2; j <= 6; ++j) csv += "," + base + std::to_string(j);
  };
  cols("theta");
  cols("dtheta");
  cols("ddtheta");
  cols("fx");
  cols("fz");
  cols("tau");
  csv += "\n";
  for (const TrajectorySample& s : samples) {
    csv += detail::fmt12e(s.t) + "," + detail::fmt12e(s.psi);
    for (std::size_t j = 0; j < 5; ++j) csv += "," + detail::fmt12e(s.q[j]);
    for (std::size_t j = 0; j < 5; ++j) csv += "," + detail::fmt12e(s.qdot[j]);
    for (std::size_t j = 0; j < 5; ++j) csv += "," + detail::fmt12e(s.qddot[j]);
    for (std::size_t j = 0; j < 5; ++j) csv += "," + detail::fmt12e(s.fx[j]);
    for (std::size_t j = 0; j < 5; ++j) csv += "," + detail::fmt12e(s.fz[j]);
    for (std::size_t j = 0; j < 5; ++j) csv += "," + detail::fmt12e(s.tau[j]);
    csv += "\n";
  }
  return csv;
}

// trajectory.csv, the thirty per-joint diagrams (position, velocity,
// acceleration, horizontal/vertical actuator force, torque) and summary.json
// with the per-joint peak magnitudes used for motor sizing.
inline void write_outputs(const std::vector<TrajectorySample>& samples,
                          const std::filesystem::path& out_dir, bool with_plots = true) {
  namespace fs = std::filesystem;
  if (samples.empty()) throw IoError(out_dir.string(), "no samples to write");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir.string(), "cannot create directory: " + ec.message());

  detail::write_file_atomic(out_dir / "trajectory.csv", trajectory_csv(samples));

  std::vector<double> ts(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) ts[i] = samples[i].t;

  struct Series {
    const char* stem;
    const char* caption;
    const char* unit;
  };
  static constexpr Series series[6] = {
      {"theta", "angular position of joint", "rad"},
      {"dtheta", "angular velocity of joint", "rad/s"},
      {"ddtheta", "angular acceleration of joint", "rad/s^2"},
      {"fx", "horizontal actuator force of joint", "N"},
      {"fz", "vertical actuator force of joint", "N"},
      {"tau", "actuator torque of joint", "N m"},
  };

  nlohmann::ordered_json summary;
  summary["sample_count"] = samples.size();
  summary["period_s"] = samples.size() >= 2
                            ? samples.back().t * static_cast<double>(samples.size()) /
                                  (static_cast<double>(samples.size()) - 1.0)
                            : 0.0;
  for (int j = 2; j <= 6; ++j) {
    const std::size_t ji = static_cast<std::size_t>(j - 2);
    nlohmann::ordered_json peaks;
    for (int s = 0; s < 6; ++s) {
      std::vector<double> ys(samples.size());
      for (std::size_t k = 0; k < samples.size(); ++k) {
        const TrajectorySample& ts_ = samples[k];
        switch (s) {
          case 0: ys[k] = ts_.q[ji]; break;
          case 1: ys[k] = ts_.qdot[ji]; break;
          case 2: ys[k] = ts_.qddot[ji]; break;
          case 3: ys[k] = ts_.fx[ji]; break;
          case 4: ys[k] = ts_.fz[ji]; break;
          default: ys[k] = ts_.tau[ji]; break;
        }
      }
      double peak = 0.0;
      for (double y : ys) peak = std::max(peak, std::abs(y));
      peaks[std::string(series[s].stem) + "_peak_abs"] = peak;
      if (with_plots) {
        const std::string name = std::string(series[s].stem) + std::to_string(j) + ".svg";
        const std::string title =
            std::string(series[s].caption) + " " + std::to_string(j);
        detail::write_file_atomic(
            out_dir / name,
            detail::svg_line_plot(ts, ys, title, "time (s)",
                                  std::string(series[s].stem) + std::to_string(j) + " (" +
                                      series[s].unit + ")"));
      }
    }
    summary["joints"][std::to_string(j)] = peaks;
  }
  detail::write_file_atomic(out_dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace weldarm
