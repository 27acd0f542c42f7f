#include "lgt/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lgt/error.hpp"

namespace lgt {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5f", v);
    return buf;
}

// SVG frame: domain box scaled to `size` pixels, y up.
struct Frame {
    Box box;
    double scale;
    double size;
    double px(double x) const { return (x - box.lo.x) * scale + 10.0; }
    double py(double y) const { return (box.hi.y - y) * scale + 10.0; }
};

Frame make_frame(const Domain& d, double size) {
    Box b = d.bounding_box();
    const double extent = std::max(b.hi.x - b.lo.x, b.hi.y - b.lo.y);
    return {b, size / extent, size};
}

std::string svg_open(const Frame& f) {
    std::ostringstream os;
    const double w = (f.box.hi.x - f.box.lo.x) * f.scale + 20.0;
    const double h = (f.box.hi.y - f.box.lo.y) * f.scale + 20.0;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_short(w) << "\" height=\""
       << fmt_short(h) << "\">\n";
    return os.str();
}

std::string boundary_path(const Domain& d, const Frame& f) {
    std::ostringstream os;
    os << "<path fill=\"none\" stroke=\"black\" stroke-width=\"1\" d=\"";
    const int n = 720;
    for (int k = 0; k <= n; ++k) {
        const Vec2 p = d.point(d.perimeter() * k / n);
        os << (k == 0 ? "M" : " L") << fmt_short(f.px(p.x)) << "," << fmt_short(f.py(p.y));
    }
    os << "\"/>\n";
    return os.str();
}

std::string line(const Frame& f, Vec2 a, Vec2 b, const char* stroke, double width) {
    std::ostringstream os;
    os << "<line x1=\"" << fmt_short(f.px(a.x)) << "\" y1=\"" << fmt_short(f.py(a.y)) << "\" x2=\""
       << fmt_short(f.px(b.x)) << "\" y2=\"" << fmt_short(f.py(b.y)) << "\" stroke=\"" << stroke
       << "\" stroke-width=\"" << width << "\"/>\n";
    return os.str();
}

}  // namespace

std::string grid_csv(const GridField& field) {
    const GridSpec& s = field.spec;
    std::string out = "origin_x,origin_y,cell,nx,ny\n";
    out += fmt(s.origin.x) + "," + fmt(s.origin.y) + "," + fmt(s.cell) + "," + std::to_string(s.nx) +
           "," + std::to_string(s.ny) + "\n";
    for (int iy = 0; iy < s.ny; ++iy) {
        for (int ix = 0; ix < s.nx; ++ix) {
            if (ix) out += ',';
            out += fmt(field.at(ix, iy));
        }
        out += '\n';
    }
    return out;
}

GridField parse_grid_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "origin_x,origin_y,cell,nx,ny") {
        throw SchemaError("grid CSV header missing");
    }
    GridSpec s;
    char c;
    if (!std::getline(in, line)) throw SchemaError("grid CSV spec line missing");
    std::istringstream head(line);
    head >> s.origin.x >> c >> s.origin.y >> c >> s.cell >> c >> s.nx >> c >> s.ny;
    if (!head || s.nx < 1 || s.ny < 1) throw SchemaError("grid CSV spec line malformed");
    GridField f(s);
    for (int iy = 0; iy < s.ny; ++iy) {
        if (!std::getline(in, line)) throw SchemaError("grid CSV truncated");
        std::istringstream row(line);
        for (int ix = 0; ix < s.nx; ++ix) {
            if (ix) row >> c;
            row >> f.at(ix, iy);
        }
        if (!row) throw SchemaError("grid CSV row malformed");
    }
    return f;
}

std::string grid_pgm(const GridField& field) {
    const GridSpec& s = field.spec;
    double vmax = 0.0;
    for (double v : field.values) vmax = std::max(vmax, std::abs(v));
    std::string out = "P5\n" + std::to_string(s.nx) + " " + std::to_string(s.ny) + "\n255\n";
    for (int iy = s.ny - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < s.nx; ++ix) {
            const double v = vmax > 0.0 ? std::abs(field.at(ix, iy)) / vmax : 0.0;
            out += static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * v)));
        }
    }
    return out;
}

std::string contour_svg(const GridField& u, const Domain& domain, const SegmentFlow& flow, int levels) {
    const Frame f = make_frame(domain, 600.0);
    const GridSpec& s = u.spec;
    double lo = 1e300, hi = -1e300;
    for (int iy = 0; iy < s.ny; ++iy)
        for (int ix = 0; ix < s.nx; ++ix) {
            if (!domain.contains(s.center(ix, iy))) continue;
            lo = std::min(lo, u.at(ix, iy));
            hi = std::max(hi, u.at(ix, iy));
        }
    std::string out = svg_open(f);
    for (const auto& seg : flow.segments) out += line(f, seg.a, seg.b, "#bbbbbb", 0.4);
    if (hi > lo && levels > 0) {
        out += "<g stroke=\"#1f4e9c\" stroke-width=\"0.8\" fill=\"none\">\n";
        // marching squares over cell centers
        for (int k = 1; k <= levels; ++k) {
            const double level = lo + (hi - lo) * k / (levels + 1.0);
            for (int iy = 0; iy + 1 < s.ny; ++iy) {
                for (int ix = 0; ix + 1 < s.nx; ++ix) {
                    const Vec2 c[4] = {s.center(ix, iy), s.center(ix + 1, iy), s.center(ix + 1, iy + 1),
                                       s.center(ix, iy + 1)};
                    bool inside = true;
                    for (const Vec2& p : c) inside = inside && domain.contains(p);
                    if (!inside) continue;
                    const double v[4] = {u.at(ix, iy), u.at(ix + 1, iy), u.at(ix + 1, iy + 1), u.at(ix, iy + 1)};
                    Vec2 hits[4];
                    int nh = 0;
                    for (int e = 0; e < 4; ++e) {
                        const double a = v[e] - level, b = v[(e + 1) % 4] - level;
                        if ((a < 0.0) != (b < 0.0)) {
                            hits[nh++] = lerp(c[e], c[(e + 1) % 4], a / (a - b));
                        }
                    }
                    if (nh >= 2) out += line(f, hits[0], hits[1], "#1f4e9c", 0.8);
                    if (nh == 4) out += line(f, hits[2], hits[3], "#1f4e9c", 0.8);
                }
            }
        }
        out += "</g>\n";
    }
    out += boundary_path(domain, f);
    out += "</svg>\n";
    return out;
}

std::string arcs_svg(const ArcSystem& arcs, const std::vector<TransportPlan>& plans) {
    const Frame f = make_frame(arcs.domain, 600.0);
    std::string out = svg_open(f);
    out += boundary_path(arcs.domain, f);
    for (const auto& plan : plans) {
        for (const auto& e : plan.entries) out += line(f, plan.sources[e.i], plan.targets[e.j], "#999999", 0.3);
    }
    for (const Arc& a : arcs.arcs) {
        std::ostringstream os;
        os << "<path fill=\"none\" stroke=\"" << (a.plus ? "#c0392b" : "#2471a3")
           << "\" stroke-width=\"4\" d=\"";
        const int n = std::max(2, static_cast<int>(a.length / arcs.domain.perimeter() * 720));
        for (int k = 0; k <= n; ++k) {
            const Vec2 p = arcs.domain.point(a.start + a.length * k / n);
            os << (k == 0 ? "M" : " L") << fmt_short(f.px(p.x)) << "," << fmt_short(f.py(p.y));
        }
        os << "\"/>\n";
        out += os.str();
    }
    out += "</svg>\n";
    return out;
}

std::string dump_json(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << contents;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace lgt
