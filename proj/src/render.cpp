#include "glueopt/render.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "glueopt/format.hpp"

namespace glueopt::io {

namespace {
std::string num(double v) { return fmtg(v, 9); }
}

void render_svg(std::ostream& os, const DomainSpec& domain,
                const CurveNetwork* net, const ScalarField* u,
                const DirichletMask* mask, const std::vector<Point2>& probes) {
  auto [lo, hi] = domain.bbox();
  double w = hi.x - lo.x, hgt = hi.y - lo.y;
  const double px = 96.0;
  // flip to the usual math orientation inside the fixed viewBox
  auto fy = [&](double y) { return lo.y + hi.y - y; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w * px)
     << "\" height=\"" << num(hgt * px) << "\" viewBox=\"" << num(lo.x) << " "
     << num(lo.y) << " " << num(w) << " " << num(hgt) << "\">\n";
  os << "<rect x=\"" << num(lo.x) << "\" y=\"" << num(lo.y) << "\" width=\""
     << num(w) << "\" height=\"" << num(hgt) << "\" fill=\"white\"/>\n";

  if (u) {
    const auto& g = u->grid;
    double vmax = 0;
    for (double v : u->v) vmax = std::max(vmax, std::abs(v));
    if (vmax <= 0) vmax = 1;
    int stride = std::max(1, (std::max(g.nx, g.ny) + 127) / 128);
    for (int j = 0; j + stride < g.ny + 1 && j < g.ny - 1; j += stride)
      for (int i = 0; i < g.nx - 1; i += stride) {
        double v = u->at(i, j) / vmax;
        if (v == 0) continue;
        int shade = (int)std::lround(255 * (1 - std::min(1.0, std::abs(v))));
        int r = v >= 0 ? shade : 255, b = v >= 0 ? 255 : shade;
        double cw = std::min(stride, g.nx - 1 - i) * g.h;
        double ch = std::min(stride, g.ny - 1 - j) * g.h;
        os << "<rect x=\"" << num(g.x(i)) << "\" y=\"" << num(fy(g.y(j) + ch))
           << "\" width=\"" << num(cw) << "\" height=\"" << num(ch)
           << "\" fill=\"rgb(" << r << "," << shade << "," << b << ")\"/>\n";
      }
  }

  if (mask && !u) {
    const auto& g = mask->grid;
    double s = 0.5 * g.h;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        if (mask->inside[g.id(i, j)] && mask->constrained[g.id(i, j)])
          os << "<rect x=\"" << num(g.x(i) - 0.5 * s) << "\" y=\""
             << num(fy(g.y(j)) - 0.5 * s) << "\" width=\"" << num(s)
             << "\" height=\"" << num(s) << "\" fill=\"#888\"/>\n";
  }

  // domain outline
  if (domain.is_disc()) {
    os << "<circle cx=\"" << num(domain.center().x) << "\" cy=\""
       << num(fy(domain.center().y)) << "\" r=\"" << num(domain.radius())
       << "\" fill=\"none\" stroke=\"black\" stroke-width=\"" << num(1.5 / px)
       << "\"/>\n";
  } else {
    os << "<path d=\"";
    const auto& v = domain.vertices();
    for (size_t i = 0; i < v.size(); ++i)
      os << (i ? "L" : "M") << num(v[i].x) << " " << num(fy(v[i].y));
    os << "Z\" fill=\"none\" stroke=\"black\" stroke-width=\"" << num(1.5 / px)
       << "\"/>\n";
  }

  if (net) {
    for (const auto& e : net->edges) {
      os << "<path d=\"";
      for (size_t k = 0; k < e.pts.size(); ++k)
        os << (k ? "L" : "M") << num(e.pts[k].x) << " " << num(fy(e.pts[k].y));
      os << "\" fill=\"none\" stroke=\"crimson\" stroke-width=\"" << num(2.0 / px)
         << "\" stroke-linecap=\"round\" stroke-linejoin=\"round\"/>\n";
    }
  }

  for (const auto& p : probes)
    os << "<circle cx=\"" << num(p.x) << "\" cy=\"" << num(fy(p.y)) << "\" r=\""
       << num(3.0 / px) << "\" fill=\"none\" stroke=\"green\" stroke-width=\""
       << num(1.5 / px) << "\"/>\n";

  os << "</svg>\n";
}

}  // namespace glueopt::io
