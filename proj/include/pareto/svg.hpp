#pragma once

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "pareto/frontier.hpp"
#include "pareto/record_book.hpp"

namespace pareto::svg {

struct RenderOptions {
  double width = 480.0;
  double height = 480.0;
  double margin = 40.0;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace detail

/// SVG 1.1 picture of a two-dimensional record frontier: the closed staircase
/// through the current records (with its axis faces), the records themselves
/// and the guide lines x_+ = F- and x_+ = F+. An empty book renders the axes
/// alone.
inline std::string render(const RecordBook& book, const RenderOptions& opt = {}) {
  if (book.dim() != 2) throw std::invalid_argument("render: only d = 2 books can be drawn");

  std::vector<std::size_t> order(book.record_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = book.record(a), rb = book.record(b);
    return ra[0] != rb[0] ? ra[0] < rb[0] : ra[1] > rb[1];
  });

  const double fp = f_plus(book);
  const double fm = f_minus(book);
  const double extent = std::max(1.0, 1.05 * fp);
  const double plot_w = opt.width - 2 * opt.margin;
  const double plot_h = opt.height - 2 * opt.margin;
  auto px = [&](double x) { return detail::num(opt.margin + x / extent * plot_w); };
  auto py = [&](double y) { return detail::num(opt.height - opt.margin - y / extent * plot_h); };
  auto xy = [&](double x, double y) { return px(x) + "," + py(y); };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + detail::num(opt.width) +
       "\" height=\"" + detail::num(opt.height) + "\" viewBox=\"0 0 " + detail::num(opt.width) + " " +
       detail::num(opt.height) + "\">\n";
  s += "<title>Record frontier, n = " + std::to_string(book.n()) + "</title>\n";
  s += "<g class=\"axes\" stroke=\"#888\" stroke-width=\"1\">\n";
  s += "<line x1=\"" + px(0) + "\" y1=\"" + py(0) + "\" x2=\"" + px(extent) + "\" y2=\"" + py(0) + "\"/>\n";
  s += "<line x1=\"" + px(0) + "\" y1=\"" + py(0) + "\" x2=\"" + px(0) + "\" y2=\"" + py(extent) + "\"/>\n";
  s += "</g>\n";

  if (!order.empty()) {
    std::string pts = xy(0, book.record(order.front())[1]);
    for (std::size_t k = 0; k < order.size(); ++k) {
      const auto rec = book.record(order[k]);
      pts += " " + xy(rec[0], rec[1]);
      const double below = k + 1 < order.size() ? book.record(order[k + 1])[1] : 0.0;
      pts += " " + xy(rec[0], below);
    }
    pts += " " + xy(0, 0) + " " + xy(0, book.record(order.front())[1]);
    s += "<polyline class=\"frontier\" fill=\"#dde8f5\" stroke=\"#1f4e8c\" stroke-width=\"1.5\" points=\"" +
         pts + "\"/>\n";

    s += "<g class=\"records\" fill=\"#c0392b\">\n";
    for (std::size_t i : order) {
      const auto rec = book.record(i);
      s += "<circle cx=\"" + px(rec[0]) + "\" cy=\"" + py(rec[1]) + "\" r=\"3\"/>\n";
    }
    s += "</g>\n";

    auto guide = [&](const char* cls, const char* colour, double sum) {
      s += std::string("<line class=\"guide ") + cls + "\" stroke=\"" + colour +
           "\" stroke-dasharray=\"4 3\" x1=\"" + px(sum) + "\" y1=\"" + py(0) + "\" x2=\"" + px(0) +
           "\" y2=\"" + py(sum) + "\"/>\n";
    };
    guide("f-minus", "#2e8b57", fm);
    guide("f-plus", "#8e44ad", fp);
  }
  s += "</svg>\n";
  return s;
}

}  // namespace pareto::svg
