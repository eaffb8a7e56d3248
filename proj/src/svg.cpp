#include "ridgeboost/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "ridgeboost/csv.hpp"

namespace ridgeboost {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

constexpr double kPanelW = 300.0;
constexpr double kPanelH = 260.0;
constexpr double kLeft = 50.0;
constexpr double kRight = 15.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 45.0;

}  // namespace

std::string coverage_figure_svg(const std::vector<sim::CoverageRow>& rows) {
  std::vector<double> mus;
  std::vector<Eigen::Index> ns;
  for (const auto& r : rows) {
    if (std::find(mus.begin(), mus.end(), r.mu_target) == mus.end()) mus.push_back(r.mu_target);
    if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);
  }
  std::sort(mus.begin(), mus.end());
  std::sort(ns.begin(), ns.end());
  const double n_lo = ns.empty() ? 0.0 : static_cast<double>(ns.front());
  const double n_hi = ns.empty() ? 1.0 : static_cast<double>(ns.back());
  const double n_span = n_hi > n_lo ? n_hi - n_lo : 1.0;

  const double width = kPanelW * static_cast<double>(std::max<std::size_t>(mus.size(), 1));
  const double height = kPanelH + 30.0;
  const double plot_w = kPanelW - kLeft - kRight;
  const double plot_h = kPanelH - kTop - kBottom;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
     << num(height) << "\" viewBox=\"0 0 " << num(width) << " " << num(height)
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<!-- columns: n,mu_target,method,coverage,mean_ci_width,mean_bias,replications -->\n";
  for (const auto& r : rows) {
    os << "<!-- " << r.n << "," << format_double(r.mu_target) << "," << sim::to_string(r.method)
       << "," << format_double(r.coverage) << "," << format_double(r.mean_ci_width) << ","
       << format_double(r.mean_bias) << "," << r.replications << " -->\n";
  }
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t p = 0; p < mus.size(); ++p) {
    const double ox = kPanelW * static_cast<double>(p);
    auto px = [&](double n) { return ox + kLeft + plot_w * (n - n_lo) / n_span; };
    auto py = [&](double c) { return kTop + plot_h * (1.0 - c); };

    os << "<g>\n";
    os << "<text x=\"" << num(ox + kLeft + plot_w / 2) << "\" y=\"18\" text-anchor=\"middle\">"
       << "target mu = " << num(mus[p]) << "</text>\n";
    os << "<rect x=\"" << num(ox + kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w)
       << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (double c : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      os << "<text x=\"" << num(ox + kLeft - 6) << "\" y=\"" << num(py(c) + 4)
         << "\" text-anchor=\"end\">" << num(c) << "</text>\n";
    }
    for (auto n : ns) {
      os << "<text x=\"" << num(px(static_cast<double>(n))) << "\" y=\""
         << num(kTop + plot_h + 15) << "\" text-anchor=\"middle\">" << n << "</text>\n";
    }
    os << "<text x=\"" << num(ox + kLeft + plot_w / 2) << "\" y=\"" << num(kTop + plot_h + 32)
       << "\" text-anchor=\"middle\">n</text>\n";
    os << "<line x1=\"" << num(ox + kLeft) << "\" y1=\"" << num(py(0.95)) << "\" x2=\""
       << num(ox + kLeft + plot_w) << "\" y2=\"" << num(py(0.95))
       << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";

    for (auto method : {sim::Method::Naive, sim::Method::Boosted}) {
      const char* color = method == sim::Method::Naive ? "#1f77b4" : "#d62728";
      std::ostringstream pts;
      bool any = false;
      for (auto n : ns) {
        const auto* row = sim::find_row(rows, n, mus[p], method);
        if (!row) continue;
        pts << (any ? " " : "") << num(px(static_cast<double>(n))) << "," << num(py(row->coverage));
        os << "<circle cx=\"" << num(px(static_cast<double>(n))) << "\" cy=\""
           << num(py(row->coverage)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        any = true;
      }
      if (any) {
        os << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"1.5\"/>\n";
      }
    }
    os << "</g>\n";
  }

  // legend
  const double ly = kPanelH + 15.0;
  os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(kLeft + 20)
     << "\" y2=\"" << num(ly) << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
  os << "<text x=\"" << num(kLeft + 25) << "\" y=\"" << num(ly + 4) << "\">naive</text>\n";
  os << "<line x1=\"" << num(kLeft + 80) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(kLeft + 100)
     << "\" y2=\"" << num(ly) << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  os << "<text x=\"" << num(kLeft + 105) << "\" y=\"" << num(ly + 4) << "\">boosted</text>\n";
  os << "<text x=\"" << num(kLeft + 170) << "\" y=\"" << num(ly + 4)
     << "\">dashed: 0.95</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace ridgeboost
