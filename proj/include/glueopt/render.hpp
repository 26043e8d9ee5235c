#pragma once

// SVG rendering: membrane field as a cell raster, network as stroked
// paths (one per edge), probe markers.  viewBox equals the domain
// bounding box in domain units; width/height are set at 96 px per unit.

#include <iosfwd>
#include <vector>

#include "glueopt/grid.hpp"

namespace glueopt::io {

using geometry::CurveNetwork;
using geometry::DomainSpec;
using geometry::Point2;
using solver::DirichletMask;
using solver::ScalarField;

void render_svg(std::ostream& os, const DomainSpec& domain,
                const CurveNetwork* net, const ScalarField* u,
                const DirichletMask* mask, const std::vector<Point2>& probes);

}  // namespace glueopt::io
