#include "shaprob/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "shaprob/csv.hpp"
#include "shaprob/error.hpp"

namespace shaprob {

namespace {

constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string fixed(double v, int digits = 2) {
  if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "non-finite value in a chart");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  std::string s(buf);
  return s == "-0.00" ? "0.00" : s;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

void open_svg(std::ostringstream& os, double width, double height, const std::string& title) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fixed(width) << "\" height=\""
     << fixed(height) << "\" viewBox=\"0 0 " << fixed(width) << ' ' << fixed(height) << "\" font-family=\"sans-serif\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << fixed(width) << "\" height=\"" << fixed(height) << "\" fill=\"white\"/>\n"
     << "<text x=\"" << fixed(width / 2) << "\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">" << escape(title)
     << "</text>\n";
}

void text(std::ostringstream& os, double x, double y, const std::string& s, const char* anchor = "start",
          int size = 11) {
  os << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(y) << "\" font-size=\"" << size << "\" text-anchor=\""
     << anchor << "\">" << escape(s) << "</text>\n";
}

void line(std::ostringstream& os, double x1, double y1, double x2, double y2, const std::string& stroke,
          double width = 1.0, bool dashed = false) {
  os << "<line x1=\"" << fixed(x1) << "\" y1=\"" << fixed(y1) << "\" x2=\"" << fixed(x2) << "\" y2=\"" << fixed(y2)
     << "\" stroke=\"" << stroke << "\" stroke-width=\"" << fixed(width) << '"';
  if (dashed) os << " stroke-dasharray=\"6 4\"";
  os << "/>\n";
}

void rect(std::ostringstream& os, double x, double y, double w, double h, const std::string& fill) {
  os << "<rect x=\"" << fixed(std::min(x, x + w)) << "\" y=\"" << fixed(std::min(y, y + h)) << "\" width=\""
     << fixed(std::abs(w)) << "\" height=\"" << fixed(std::abs(h)) << "\" fill=\"" << fill << "\"/>\n";
}

struct Frame {
  double left, top, width, height;
  double x_min, x_max, y_min, y_max;

  double px(double x) const { return left + (x - x_min) / (x_max - x_min) * width; }
  double py(double y) const { return top + height - (y - y_min) / (y_max - y_min) * height; }
};

void axes(std::ostringstream& os, const Frame& f, const std::string& x_label, const std::string& y_label) {
  constexpr int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double xv = f.x_min + (f.x_max - f.x_min) * i / ticks;
    const double yv = f.y_min + (f.y_max - f.y_min) * i / ticks;
    line(os, f.px(xv), f.top, f.px(xv), f.top + f.height, "#e0e0e0");
    line(os, f.left, f.py(yv), f.left + f.width, f.py(yv), "#e0e0e0");
    text(os, f.px(xv), f.top + f.height + 16, fixed(xv), "middle", 10);
    text(os, f.left - 6, f.py(yv) + 4, fixed(yv), "end", 10);
  }
  if (f.y_min < 0.0 && f.y_max > 0.0) line(os, f.left, f.py(0.0), f.left + f.width, f.py(0.0), "#808080");
  line(os, f.left, f.top + f.height, f.left + f.width, f.top + f.height, "black");
  line(os, f.left, f.top, f.left, f.top + f.height, "black");
  text(os, f.left + f.width / 2, f.top + f.height + 36, x_label, "middle", 12);
  os << "<text x=\"16\" y=\"" << fixed(f.top + f.height / 2) << "\" font-size=\"12\" text-anchor=\"middle\" "
     << "transform=\"rotate(-90 16 " << fixed(f.top + f.height / 2) << ")\">" << escape(y_label) << "</text>\n";
}

void pad_range(double& lo, double& hi) {
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
    return;
  }
  const double pad = (hi - lo) * 0.05;
  lo -= pad;
  hi += pad;
}

}  // namespace

void WaterfallSpec::check() const {
  double sum = baseline;
  for (const auto& b : bars) sum += b.value;
  if (std::abs(sum - total) > 1e-9)
    throw Error(ErrorKind::InvalidArgument, "waterfall bars do not add up to the total");
}

WaterfallSpec waterfall(const Attribution& a) {
  WaterfallSpec w;
  w.title = a.target_tag;
  w.baseline_label = "random classifier";
  w.baseline = a.baseline;
  for (auto i : a.order_by_magnitude()) w.bars.push_back({a.names[i], a.values[i]});
  w.total_label = "model";
  w.total = a.total;
  w.check();
  return w;
}

const std::string& palette_color(std::size_t index) {
  static const std::array<std::string, 10> colors = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                     "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return colors[index % colors.size()];
}

std::string percent_label(double value) { return fixed(value * 100.0) + "%"; }

void PlotDocument::fit_axes() {
  auto cover = [this](double x, double y) {
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  };
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.x.size(); ++k)
      if (s.y[k]) cover(s.x[k], *s.y[k]);
  for (const auto& b : bands)
    for (std::size_t k = 0; k < b.x.size(); ++k) {
      cover(b.x[k], b.lower[k]);
      cover(b.x[k], b.upper[k]);
    }
  if (x_max - x_min < 1e-12) pad_range(x_min, x_max);
  if (y_max - y_min < 1e-12) pad_range(y_min, y_max);
}

PlotDocument contribution_curves(const CurveAttribution& ca) {
  if (ca.points() == 0) throw Error(ErrorKind::InvalidArgument, "empty grid");
  PlotDocument doc;
  doc.title = "Feature contributions, " + ca.target_tag;
  doc.x_label = ca.target_tag.rfind("ROC", 0) == 0 ? "false positive rate" : "recall";
  doc.y_label = "contribution";
  doc.x_min = ca.abscissae.front();
  doc.x_max = ca.abscissae.back();
  doc.y_min = doc.y_max = 0.0;
  for (std::size_t i = 0; i < ca.players(); ++i) {
    Series s{ca.names[i], palette_color(i), ca.abscissae, {}, false};
    for (double v : ca.per_feature[i]) s.y.emplace_back(v);
    doc.series.push_back(std::move(s));
  }
  Series ref{"model - random", "#000000", ca.abscissae, {}, true};
  for (std::size_t k = 0; k < ca.points(); ++k) ref.y.emplace_back(ca.reference[k] - ca.baseline[k]);
  doc.series.push_back(std::move(ref));
  doc.fit_axes();
  return doc;
}

PlotDocument relative_contributions(const CurveAttribution& ca) {
  if (ca.points() == 0) throw Error(ErrorKind::InvalidArgument, "empty grid");
  PlotDocument doc;
  doc.title = "Relative contributions, " + ca.target_tag;
  doc.x_label = ca.target_tag.rfind("ROC", 0) == 0 ? "false positive rate" : "recall";
  doc.y_label = "share of total contribution";
  doc.x_min = ca.abscissae.front();
  doc.x_max = ca.abscissae.back();
  doc.y_min = doc.y_max = 0.0;
  for (std::size_t i = 0; i < ca.players(); ++i) {
    Series s{ca.names[i], palette_color(i), ca.abscissae, {}, false};
    for (std::size_t k = 0; k < ca.points(); ++k) {
      const double total = ca.sum_at(k);
      if (std::abs(total) < 1e-9)
        s.y.emplace_back(std::nullopt);
      else
        s.y.emplace_back(ca.per_feature[i][k] / total);
    }
    doc.series.push_back(std::move(s));
  }
  doc.fit_axes();
  return doc;
}

PlotDocument banded_plot(const BandedSeries& b, bool unit_range) {
  PlotDocument doc = banded_plot(std::span(&b, 1), b.label, unit_range);
  doc.series.front().color = "#1f77b4";
  doc.bands.front().color = "#1f77b4";
  return doc;
}

PlotDocument banded_plot(std::span<const BandedSeries> bands, const std::string& title, bool unit_range) {
  if (bands.empty()) throw Error(ErrorKind::InvalidArgument, "nothing to plot");
  PlotDocument doc;
  doc.title = title;
  doc.x_label = "abscissa";
  doc.y_label = "mean +/- std";
  doc.x_min = bands.front().abscissae.front();
  doc.x_max = bands.front().abscissae.back();
  doc.y_min = doc.y_max = 0.0;
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const auto& b = bands[i];
    Band band{b.label, palette_color(i), b.abscissae, {}, {}};
    Series mean{b.label, palette_color(i), b.abscissae, {}, false};
    for (std::size_t k = 0; k < b.abscissae.size(); ++k) {
      double lo = b.mean[k] - b.stddev[k];
      double hi = b.mean[k] + b.stddev[k];
      if (unit_range) {
        lo = std::clamp(lo, 0.0, 1.0);
        hi = std::clamp(hi, 0.0, 1.0);
      }
      band.lower.push_back(lo);
      band.upper.push_back(hi);
      mean.y.emplace_back(b.mean[k]);
    }
    doc.bands.push_back(std::move(band));
    doc.series.push_back(std::move(mean));
  }
  if (unit_range) {
    doc.y_min = 0.0;
    doc.y_max = 1.0;
  }
  doc.fit_axes();
  return doc;
}

std::string render_svg(const PlotDocument& doc) {
  std::ostringstream os;
  open_svg(os, doc.width, doc.height, doc.title);
  const Frame f{kLeft, kTop, doc.width - kLeft - kRight, doc.height - kTop - kBottom,
                doc.x_min, doc.x_max, doc.y_min, doc.y_max};
  axes(os, f, doc.x_label, doc.y_label);

  for (const auto& b : doc.bands) {
    os << "<polygon fill=\"" << b.color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
    for (std::size_t k = 0; k < b.x.size(); ++k) os << fixed(f.px(b.x[k])) << ',' << fixed(f.py(b.upper[k])) << ' ';
    for (std::size_t k = b.x.size(); k-- > 0;) os << fixed(f.px(b.x[k])) << ',' << fixed(f.py(b.lower[k])) << ' ';
    os << "\"/>\n";
  }

  for (const auto& s : doc.series) {
    std::size_t k = 0;
    while (k < s.x.size()) {
      if (!s.y[k]) {
        ++k;
        continue;
      }
      std::size_t end = k;
      while (end < s.x.size() && s.y[end]) ++end;
      if (end - k == 1) {
        os << "<circle cx=\"" << fixed(f.px(s.x[k])) << "\" cy=\"" << fixed(f.py(*s.y[k])) << "\" r=\"2.5\" fill=\""
           << s.color << "\"/>\n";
      } else {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"";
        if (s.dashed) os << " stroke-dasharray=\"6 4\"";
        os << " points=\"";
        for (std::size_t j = k; j < end; ++j) os << fixed(f.px(s.x[j])) << ',' << fixed(f.py(*s.y[j])) << ' ';
        os << "\"/>\n";
      }
      k = end;
    }
  }

  const double lx = f.left + f.width + 16;
  for (std::size_t i = 0; i < doc.series.size(); ++i) {
    const double ly = f.top + 14 + 18.0 * static_cast<double>(i);
    line(os, lx, ly - 4, lx + 22, ly - 4, doc.series[i].color, 2.5, doc.series[i].dashed);
    text(os, lx + 28, ly, doc.series[i].name);
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_svg(const WaterfallSpec& w) {
  w.check();
  const double row = 28.0;
  const double width = 720.0;
  const double height = kTop + kBottom + row * static_cast<double>(w.bars.size() + 2);

  double lo = std::min(0.0, std::min(w.baseline, w.total));
  double hi = std::max(w.baseline, w.total);
  double running = w.baseline;
  for (const auto& b : w.bars) {
    running += b.value;
    lo = std::min(lo, running);
    hi = std::max(hi, running);
  }
  pad_range(lo, hi);

  std::ostringstream os;
  open_svg(os, width, height, w.title);
  const double label_width = 150.0;
  const Frame f{label_width, kTop, width - label_width - 90.0, row * static_cast<double>(w.bars.size() + 2), lo, hi,
                0.0, 1.0};
  for (int i = 0; i <= 5; ++i) {
    const double xv = lo + (hi - lo) * i / 5;
    line(os, f.px(xv), f.top, f.px(xv), f.top + f.height, "#e0e0e0");
    text(os, f.px(xv), f.top + f.height + 16, percent_label(xv), "middle", 10);
  }

  auto bar = [&](std::size_t r, double from, double to, const std::string& fill, const std::string& label,
                 const std::string& value) {
    const double y = f.top + row * static_cast<double>(r) + 4;
    rect(os, f.px(from), y, f.px(to) - f.px(from), row - 8, fill);
    text(os, label_width - 8, y + row / 2, label, "end");
    text(os, std::max(f.px(from), f.px(to)) + 6, y + row / 2, value);
  };

  bar(0, 0.0, w.baseline, "#9e9e9e", w.baseline_label, percent_label(w.baseline));
  running = w.baseline;
  for (std::size_t i = 0; i < w.bars.size(); ++i) {
    const auto& b = w.bars[i];
    const std::string sign = b.value >= 0.0 ? "+" : "";
    bar(i + 1, running, running + b.value, b.value >= 0.0 ? "#2ca02c" : "#d62728", b.name,
        sign + percent_label(b.value));
    running += b.value;
  }
  bar(w.bars.size() + 1, 0.0, w.total, "#1f77b4", w.total_label, percent_label(w.total));
  line(os, f.px(w.baseline), f.top, f.px(w.baseline), f.top + f.height, "#606060", 1.0, true);
  os << "</svg>\n";
  return os.str();
}

std::string render_whiskers(const McAttribution& a) {
  const std::size_t n = a.names.size();
  const double width = std::max(480.0, 110.0 * static_cast<double>(n) + kLeft + 40.0);
  const double height = 420.0;
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lo = std::min(lo, a.mean[i] - a.stddev[i]);
    hi = std::max(hi, a.mean[i] + a.stddev[i]);
  }
  pad_range(lo, hi);

  std::ostringstream os;
  open_svg(os, width, height, a.target_tag + " over " + std::to_string(a.iterations) + " iterations");
  const Frame f{kLeft, kTop, width - kLeft - 40.0, height - kTop - kBottom, 0.0, static_cast<double>(n), lo, hi};
  for (int i = 0; i <= 5; ++i) {
    const double yv = lo + (hi - lo) * i / 5;
    line(os, f.left, f.py(yv), f.left + f.width, f.py(yv), "#e0e0e0");
    text(os, f.left - 6, f.py(yv) + 4, percent_label(yv), "end", 10);
  }
  line(os, f.left, f.py(0.0), f.left + f.width, f.py(0.0), "black");
  for (std::size_t i = 0; i < n; ++i) {
    const double cx = f.px(static_cast<double>(i) + 0.5);
    const double half = f.width / static_cast<double>(n) * 0.3;
    rect(os, cx - half, f.py(0.0), 2 * half, f.py(a.mean[i]) - f.py(0.0), palette_color(i));
    const double top = f.py(a.mean[i] + a.stddev[i]);
    const double bottom = f.py(a.mean[i] - a.stddev[i]);
    line(os, cx, top, cx, bottom, "black", 1.5);
    line(os, cx - half / 2, top, cx + half / 2, top, "black", 1.5);
    line(os, cx - half / 2, bottom, cx + half / 2, bottom, "black", 1.5);
    text(os, cx, f.top + f.height + 16, a.names[i], "middle");
    text(os, cx, f.top + f.height + 32, percent_label(a.mean[i]), "middle", 10);
  }
  os << "</svg>\n";
  return os.str();
}

void write_series_csv(const PlotDocument& doc, const std::filesystem::path& path) {
  csv::Table t;
  t.header = {"x"};
  if (doc.series.empty()) {
    csv::write(t, path);
    return;
  }
  const auto& x = doc.series.front().x;
  for (const auto& s : doc.series) {
    if (s.x != x) throw Error(ErrorKind::InvalidArgument, "series must share abscissae to be tabulated");
    t.header.push_back(s.name);
  }
  for (std::size_t k = 0; k < x.size(); ++k) {
    std::vector<std::string> row{csv::number(x[k])};
    for (const auto& s : doc.series) row.push_back(s.y[k] ? csv::number(*s.y[k]) : std::string{});
    t.rows.push_back(std::move(row));
  }
  csv::write(t, path);
}

void write_curve_csv(std::span<const CurvePoint> points, const std::filesystem::path& path) {
  csv::Table t;
  t.header = {"x", "y"};
  for (const auto& p : points) t.rows.push_back({csv::number(p.x), csv::number(p.y)});
  csv::write(t, path);
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace shaprob
