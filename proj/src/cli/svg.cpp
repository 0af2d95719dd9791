#include "cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace itt::svg {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string header(double w, double h) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) +
         "\" height=\"" + num(h) + "\" viewBox=\"0 0 " + num(w) + " " + num(h) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, std::string_view s, std::string_view anchor = "start") {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + std::string(anchor) + "\">" + escape(s) +
         "</text>\n";
}

std::string line(double x1, double y1, double x2, double y2, std::string_view stroke, double width = 1.0) {
  return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
         "\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" + num(width) + "\"/>\n";
}

constexpr const char* kDimColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

}  // namespace

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string barcode(const Barcode& b, const std::string& title, double x_max) {
  const double left = 50, right = 20, width = 600, row = 6, gap = 40;
  const int dims = b.max_dim + 1;
  std::vector<std::vector<const Bar*>> by_dim(static_cast<std::size_t>(dims));
  for (const Bar& bar : b.bars)
    if (bar.dim >= 0 && bar.dim < dims) by_dim[static_cast<std::size_t>(bar.dim)].push_back(&bar);
  if (!(x_max > 0)) x_max = 1.0;
  auto x_of = [&](double v) { return left + std::min(v, x_max) / x_max * width; };

  double y = 30;
  std::string body = text(left, 18, title);
  for (int d = 0; d < dims; ++d) {
    const auto& bars = by_dim[static_cast<std::size_t>(d)];
    const double h = std::max<double>(1, static_cast<double>(bars.size())) * row + 10;
    body += text(8, y + 12, "H" + std::to_string(d));
    body += "<rect x=\"" + num(left) + "\" y=\"" + num(y) + "\" width=\"" + num(width) + "\" height=\"" + num(h) +
            "\" fill=\"none\" stroke=\"#999\"/>\n";
    double by = y + 5 + row / 2;
    for (const Bar* bar : bars) {
      const char* color = kDimColors[d % 4];
      const double x1 = x_of(bar->birth);
      if (std::isinf(bar->death)) {
        const double x2 = left + width;
        body += line(x1, by, x2 - 4, by, color, 2);
        body += "<polygon points=\"" + num(x2 - 4) + "," + num(by - 3) + " " + num(x2) + "," + num(by) + " " +
                num(x2 - 4) + "," + num(by + 3) + "\" fill=\"" + color + "\"/>\n";
      } else {
        body += line(x1, by, std::max(x_of(bar->death), x1 + 0.5), by, color, 2);
      }
      by += row;
    }
    y += h + gap;
  }
  // Scale axis under the last panel.
  const double axis = y - gap + 8;
  body += line(left, axis, left + width, axis, "#333");
  for (int k = 0; k <= 5; ++k) {
    const double v = x_max * k / 5.0;
    body += line(x_of(v), axis, x_of(v), axis + 4, "#333");
    body += text(x_of(v), axis + 16, num(v), "middle");
  }
  body += text(left + width / 2, axis + 30, "filtration value (angstrom)", "middle");
  return header(left + width + right, axis + 40) + body + "</svg>\n";
}

std::string histogram(const std::map<std::size_t, std::size_t>& counts, const std::string& title,
                      const std::string& x_label) {
  const double left = 50, top = 30, width = 600, height = 300;
  std::size_t max_count = 1, max_key = 1;
  for (const auto& [k, c] : counts) {
    max_count = std::max(max_count, c);
    max_key = std::max(max_key, k);
  }
  const double slot = width / static_cast<double>(max_key + 1);
  std::string body = text(left, 18, title);
  for (const auto& [k, c] : counts) {
    const double h = height * static_cast<double>(c) / static_cast<double>(max_count);
    body += "<rect x=\"" + num(left + slot * static_cast<double>(k)) + "\" y=\"" + num(top + height - h) +
            "\" width=\"" + num(std::max(slot * 0.9, 0.5)) + "\" height=\"" + num(h) + "\" fill=\"#1f77b4\"/>\n";
  }
  body += line(left, top + height, left + width, top + height, "#333");
  body += line(left, top, left, top + height, "#333");
  body += text(left - 4, top + 10, std::to_string(max_count), "end");
  body += text(left - 4, top + height, "0", "end");
  body += text(left, top + height + 16, "0", "middle");
  body += text(left + slot * static_cast<double>(max_key), top + height + 16, std::to_string(max_key), "middle");
  body += text(left + width / 2, top + height + 32, x_label, "middle");
  return header(left + width + 20, top + height + 45) + body + "</svg>\n";
}

std::string heatmap(const std::vector<std::vector<double>>& values, const std::vector<std::string>& labels,
                    const std::string& title) {
  const double left = 50, top = 40, cell = 50;
  const double n = static_cast<double>(values.size());
  std::string body = text(left, 18, title);
  for (std::size_t i = 0; i < values.size(); ++i) {
    body += text(left - 6, top + cell * (static_cast<double>(i) + 0.6), labels[i], "end");
    body += text(left + cell * (static_cast<double>(i) + 0.5), top - 6, labels[i], "middle");
    for (std::size_t j = 0; j < values[i].size(); ++j) {
      const double v = std::clamp(values[i][j], 0.0, 100.0);
      const int shade = static_cast<int>(std::lround(255 - 2.2 * v));
      char fill[16];
      std::snprintf(fill, sizeof fill, "#%02x%02xff", shade, shade);
      const double x = left + cell * static_cast<double>(j), y = top + cell * static_cast<double>(i);
      body += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cell) + "\" height=\"" + num(cell) +
              "\" fill=\"" + fill + "\" stroke=\"white\"/>\n";
      body += text(x + cell / 2, y + cell / 2 + 4, num(values[i][j]), "middle");
    }
  }
  return header(left + cell * n + 20, top + cell * n + 20) + body + "</svg>\n";
}

}  // namespace itt::svg
