#include "pwell/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace pwell {

namespace {

struct Panel {
  std::string label;
  std::vector<double> values;
};

std::string polyline(const std::vector<double>& ts, const std::vector<double>& ys, double x0,
                     double y0, double width, double height) {
  double t_lo = ts.front(), t_hi = ts.back();
  double y_lo = *std::min_element(ys.begin(), ys.end());
  double y_hi = *std::max_element(ys.begin(), ys.end());
  if (t_hi <= t_lo) t_hi = t_lo + 1.0;
  if (y_hi <= y_lo) {
    y_hi = y_lo + 1.0;
    y_lo -= 1.0;
  }
  std::ostringstream out;
  out << "<polyline fill=\"none\" stroke=\"#20639b\" stroke-width=\"1.2\" points=\"";
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double px = x0 + width * (ts[i] - t_lo) / (t_hi - t_lo);
    const double py = y0 + height * (1.0 - (ys[i] - y_lo) / (y_hi - y_lo));
    out << px << ',' << py << ' ';
  }
  out << "\"/>";
  return out.str();
}

} // namespace

void write_trajectory_svg(const Trajectory& trajectory, const std::string& path) {
  const auto& rows = trajectory.rows;
  if (rows.empty()) throw std::invalid_argument("write_trajectory_svg: empty trajectory");

  std::vector<double> ts;
  ts.reserve(rows.size());
  for (const auto& row : rows) ts.push_back(row.snap.t);

  auto collect = [&rows](const std::function<double(const TrajectoryRow&)>& get) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& row : rows) v.push_back(get(row));
    return v;
  };

  const std::vector<Panel> panels = {
      {"E", collect([](const TrajectoryRow& r) { return r.snap.E; })},
      {"I", collect([](const TrajectoryRow& r) { return r.snap.I; })},
      {"|grad u|", collect([](const TrajectoryRow& r) { return std::sqrt(r.snap.grad_sq); })},
      {"theta", collect([](const TrajectoryRow& r) { return r.theta; })},
  };

  const double panel_w = 560, panel_h = 120, margin = 36, gap = 22;
  const double total_w = panel_w + 2 * margin;
  const double total_h = margin + panels.size() * (panel_h + gap);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total_w << "\" height=\""
      << total_h << "\" viewBox=\"0 0 " << total_w << ' ' << total_h << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  double y = margin * 0.5;
  for (const Panel& panel : panels) {
    // Clamp non-finite samples so a blow-up tail still renders.
    std::vector<double> ys = panel.values;
    double finite_max = 0.0;
    for (double v : ys) {
      if (std::isfinite(v)) finite_max = std::max(finite_max, std::abs(v));
    }
    for (double& v : ys) {
      if (!std::isfinite(v)) v = finite_max;
    }
    svg << "<rect x=\"" << margin << "\" y=\"" << y << "\" width=\"" << panel_w
        << "\" height=\"" << panel_h << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"0.6\"/>\n";
    svg << "<text x=\"" << margin + 4 << "\" y=\"" << y + 13
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">" << panel.label
        << "</text>\n";
    svg << polyline(ts, ys, margin, y, panel_w, panel_h) << '\n';
    y += panel_h + gap;
  }
  svg << "<text x=\"" << margin << "\" y=\"" << total_h - 6
      << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#555\">t in [" << ts.front()
      << ", " << ts.back() << "]</text>\n";
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << svg.str();
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

} // namespace pwell
