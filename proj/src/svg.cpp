#include <sstream>

#include "nsplace/metrics.hpp"
#include "nsplace/util.hpp"

namespace nsplace {

// Board-space y grows upward; SVG y grows downward, so every y is flipped
// against the board height before emission.
std::string render_svg(const Design& d, const Placement& p,
                       const SvgOptions& opts) {
  const double W = d.board.width, H = d.board.height;
  const double s = opts.scale;
  auto X = [&](double x) { return x * s; };
  auto Y = [&](double y) { return (H - y) * s; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
     << fmt_double(W * s) << "\" height=\"" << fmt_double(H * s)
     << "\" viewBox=\"0 0 " << fmt_double(W * s) << " " << fmt_double(H * s)
     << "\">\n";
  os << "<path d=\"M0 0 H" << fmt_double(W * s) << " V" << fmt_double(H * s)
     << " H0 Z\" fill=\"#fcfcf4\" stroke=\"#333\" stroke-width=\""
     << fmt_double(0.05 * s) << "\"/>\n";

  for (size_t i = 0; i < d.components.size(); ++i) {
    Rect f = footprint(d, p, int(i));
    const char* fill = d.components[i].fixed ? "#d9c8a0" : "#bcd4e6";
    os << "<rect x=\"" << fmt_double(X(f.x)) << "\" y=\""
       << fmt_double(Y(f.y + f.h)) << "\" width=\"" << fmt_double(f.w * s)
       << "\" height=\"" << fmt_double(f.h * s) << "\" fill=\"" << fill
       << "\" stroke=\"#456\" stroke-width=\"" << fmt_double(0.03 * s)
       << "\"/>\n";
    double fs = 0.35 * std::min(f.w, f.h) * s;
    os << "<text x=\"" << fmt_double(X(f.x + 0.5 * f.w)) << "\" y=\""
       << fmt_double(Y(f.y + 0.5 * f.h)) << "\" font-size=\"" << fmt_double(fs)
       << "\" text-anchor=\"middle\" dominant-baseline=\"middle\" "
          "fill=\"#234\">"
       << d.components[i].id << "</text>\n";
  }

  if (opts.draw_hulls) {
    for (const auto& net : d.nets) {
      if (net.pins.size() < 3) continue;
      std::vector<Point> pts;
      for (const auto& ref : net.pins)
        pts.push_back(pin_position(p, d, ref.comp, ref.pin));
      Polygon hull = convex_hull(pts);
      if (hull.v.size() < 3) continue;
      os << "<polygon points=\"";
      for (const auto& v : hull.v)
        os << fmt_double(X(v.x)) << "," << fmt_double(Y(v.y)) << " ";
      os << "\" fill=\"#7bb66233\" stroke=\"#5a8\" stroke-width=\""
         << fmt_double(0.02 * s) << "\"/>\n";
    }
  }

  for (const auto& net : d.nets) {
    if (net.pins.size() < 2) continue;
    double cx = 0, cy = 0;
    std::vector<Point> pts;
    for (const auto& ref : net.pins) {
      Point pt = pin_position(p, d, ref.comp, ref.pin);
      pts.push_back(pt);
      cx += pt.x;
      cy += pt.y;
    }
    cx /= double(pts.size());
    cy /= double(pts.size());
    for (const auto& pt : pts) {
      os << "<line x1=\"" << fmt_double(X(cx)) << "\" y1=\"" << fmt_double(Y(cy))
         << "\" x2=\"" << fmt_double(X(pt.x)) << "\" y2=\""
         << fmt_double(Y(pt.y)) << "\" stroke=\"#c33\" stroke-width=\""
         << fmt_double(0.02 * s) << "\" stroke-opacity=\"0.7\"/>\n";
      os << "<circle cx=\"" << fmt_double(X(pt.x)) << "\" cy=\""
         << fmt_double(Y(pt.y)) << "\" r=\"" << fmt_double(0.06 * s)
         << "\" fill=\"#c33\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace nsplace
