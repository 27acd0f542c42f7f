#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lgt/cex.hpp"
#include "lgt/density.hpp"
#include "lgt/leastgrad.hpp"

namespace lgt {

/// Header "origin_x,origin_y,cell,nx,ny", one line with those values, then
/// ny rows of nx comma-separated values (row iy = 0 first).
std::string grid_csv(const GridField& field);
GridField parse_grid_csv(const std::string& text);

/// Binary 8-bit PGM, max-value normalized, top row = largest y.
std::string grid_pgm(const GridField& field);

/// Contour lines of u at `levels` equally spaced values, clipped to the
/// domain, with the flow segments drawn underneath.
std::string contour_svg(const GridField& u, const Domain& domain, const SegmentFlow& flow,
                        int levels = 16);

/// Arc layout of the counter-example with the pair plans' rays.
std::string arcs_svg(const ArcSystem& arcs, const std::vector<TransportPlan>& plans);

/// Pretty JSON with a trailing newline.
std::string dump_json(const nlohmann::json& doc);

void write_file(const std::string& path, const std::string& contents);

}  // namespace lgt
