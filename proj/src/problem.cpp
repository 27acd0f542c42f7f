#include "lgt/problem.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "lgt/error.hpp"

namespace lgt {

using nlohmann::json;

namespace {

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw SchemaError(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) throw SchemaError("unknown key '" + key + "' in " + where);
    }
}

const json& required(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(where + " needs '" + key + "'");
    return *it;
}

double number(const json& v, const std::string& what) {
    if (!v.is_number()) throw SchemaError(what + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw SchemaError(what + " must be finite");
    return x;
}

int positive_int(const json& v, const std::string& what) {
    if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 1'000'000) {
        throw SchemaError(what + " must be a positive integer");
    }
    return v.get<int>();
}

std::vector<double> number_list(const json& v, const std::string& what) {
    if (!v.is_array()) throw SchemaError(what + " must be an array");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(number(x, what));
    return out;
}

std::vector<std::vector<double>> rows(const json& v, std::size_t min_len, std::size_t max_len,
                                      const std::string& what) {
    if (!v.is_array()) throw SchemaError(what + " must be an array of arrays");
    std::vector<std::vector<double>> out;
    for (const auto& r : v) {
        std::vector<double> row = number_list(r, what);
        if (row.size() < min_len || row.size() > max_len) {
            std::ostringstream os;
            os << what << " entries need " << min_len;
            if (max_len != min_len) os << " to " << max_len;
            os << " numbers";
            throw SchemaError(os.str());
        }
        out.push_back(std::move(row));
    }
    return out;
}

Domain parse_domain(const json& d) {
    if (!d.is_object()) throw SchemaError("domain must be an object");
    const std::string kind = required(d, "kind", "domain").get<std::string>();
    if (kind == "disk") {
        only_keys(d, {"kind", "radius"}, "domain");
        const double r = number(required(d, "radius", "domain"), "domain.radius");
        if (!(r > 0.0)) throw SchemaError("domain.radius must be positive");
        return Domain::disk(r);
    }
    if (kind == "ellipse") {
        only_keys(d, {"kind", "a", "b"}, "domain");
        const double a = number(required(d, "a", "domain"), "domain.a");
        const double b = number(required(d, "b", "domain"), "domain.b");
        if (!(a > 0.0 && b > 0.0)) throw SchemaError("ellipse semi-axes must be positive");
        return Domain::ellipse(a, b);
    }
    if (kind == "radial") {
        only_keys(d, {"kind", "r0", "cos", "sin"}, "domain");
        RadialProfile prof;
        prof.r0 = number(required(d, "r0", "domain"), "domain.r0");
        if (d.contains("cos")) prof.cos_coeffs = number_list(d["cos"], "domain.cos");
        if (d.contains("sin")) prof.sin_coeffs = number_list(d["sin"], "domain.sin");
        return Domain::radial(prof);
    }
    throw SchemaError("unknown domain kind '" + kind + "'");
}

Norm parse_norm(const json& n) {
    if (!n.is_object()) throw SchemaError("norm must be an object");
    const std::string kind = required(n, "kind", "norm").get<std::string>();
    if (kind == "euclidean") {
        only_keys(n, {"kind"}, "norm");
        return Norm::euclidean();
    }
    if (kind == "lq") {
        only_keys(n, {"kind", "q"}, "norm");
        return Norm::lq(number(required(n, "q", "norm"), "norm.q"));
    }
    if (kind == "quadratic") {
        only_keys(n, {"kind", "A"}, "norm");
        const auto a = rows(required(n, "A", "norm"), 2, 2, "norm.A");
        if (a.size() != 2) throw SchemaError("norm.A must be 2x2");
        if (std::abs(a[0][1] - a[1][0]) > 1e-12 * (std::abs(a[0][1]) + 1.0)) {
            throw SchemaError("norm.A must be symmetric");
        }
        return Norm::quadratic({a[0][0], a[0][1], a[1][1]});
    }
    throw SchemaError("unknown norm kind '" + kind + "'");
}

BoundaryMeasure parse_atoms(const json& v, double perimeter, const std::string& what) {
    std::vector<Atom> atoms;
    for (const auto& r : rows(v, 2, 3, what)) {
        if (r[1] < 0.0) throw SchemaError(what + " masses must be nonnegative");
        const double width = r.size() == 3 ? r[2] : 0.0;
        if (width < 0.0) throw SchemaError(what + " widths must be nonnegative");
        atoms.push_back({r[0], r[1], width});
    }
    return BoundaryMeasure(atoms, perimeter);
}

}  // namespace

json number_or_inf(double value) {
    if (std::isinf(value)) return "inf";
    return value;
}

json domain_to_json(const Domain& domain) {
    switch (domain.kind()) {
        case DomainKind::disk:
            return {{"kind", "disk"}, {"radius", domain.radius()}};
        case DomainKind::ellipse:
            return {{"kind", "ellipse"}, {"a", domain.semi_axis_a()}, {"b", domain.semi_axis_b()}};
        case DomainKind::radial: {
            const RadialProfile& p = domain.profile();
            return {{"kind", "radial"}, {"r0", p.r0}, {"cos", p.cos_coeffs}, {"sin", p.sin_coeffs}};
        }
    }
    return {};
}

json norm_to_json(const Norm& norm) {
    switch (norm.kind()) {
        case NormKind::euclidean:
            return {{"kind", "euclidean"}};
        case NormKind::lq:
            return {{"kind", "lq"}, {"q", norm.exponent()}};
        case NormKind::quadratic: {
            const Sym2& a = norm.matrix();
            return {{"kind", "quadratic"}, {"A", {{a.xx, a.xy}, {a.xy, a.yy}}}};
        }
    }
    return {};
}

namespace {

ProblemFile parse_checked(const json& doc) {
    only_keys(doc, {"domain", "norm", "g", "f_plus", "f_minus", "grid", "quadrature", "seed"}, "problem");
    ProblemFile pf;
    pf.domain = parse_domain(required(doc, "domain", "problem"));
    if (doc.contains("norm")) pf.norm = parse_norm(doc["norm"]);
    const double per = pf.domain.perimeter();

    const bool has_g = doc.contains("g");
    const bool has_atoms = doc.contains("f_plus") || doc.contains("f_minus");
    if (has_g == has_atoms) throw SchemaError("problem needs exactly one of 'g' or 'f_plus'/'f_minus'");
    if (has_g) {
        const json& g = doc["g"];
        only_keys(g, {"samples", "jumps"}, "g");
        std::vector<DatumSample> samples;
        std::vector<DatumJump> jumps;
        for (const auto& r : rows(required(g, "samples", "g"), 2, 2, "g.samples")) samples.push_back({r[0], r[1]});
        if (g.contains("jumps")) {
            for (const auto& r : rows(g["jumps"], 2, 2, "g.jumps")) jumps.push_back({r[0], r[1]});
        }
        if (samples.empty()) throw SchemaError("g.samples must not be empty");
        pf.g = BoundaryDatum(samples, jumps, per);
    } else {
        pf.f_plus = parse_atoms(required(doc, "f_plus", "problem"), per, "f_plus");
        pf.f_minus = parse_atoms(required(doc, "f_minus", "problem"), per, "f_minus");
    }

    if (doc.contains("grid")) {
        const json& grid = doc["grid"];
        only_keys(grid, {"nx", "ny"}, "grid");
        if (grid.contains("nx")) pf.nx = positive_int(grid["nx"], "grid.nx");
        if (grid.contains("ny")) pf.ny = positive_int(grid["ny"], "grid.ny");
    }
    if (doc.contains("quadrature")) pf.quadrature = positive_int(doc["quadrature"], "quadrature");
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !(doc["seed"].is_number_integer() && doc["seed"].get<long long>() >= 0)) {
            throw SchemaError("seed must be a nonnegative integer");
        }
        pf.seed = doc["seed"].get<std::uint64_t>();
    }
    return pf;
}

}  // namespace

ProblemFile parse_problem(const json& doc) {
    try {
        return parse_checked(doc);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("problem file has the wrong shape: ") + e.what());
    }
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot read problem file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("problem file is not valid JSON: ") + e.what());
    }
    return parse_problem(doc);
}

SignedMeasure ProblemFile::measures() const {
    if (g) return tangential_derivative(*g, quadrature);
    return remove_common_mass(f_plus, f_minus);
}

json ProblemFile::resolved() const {
    json out;
    out["domain"] = domain_to_json(domain);
    out["norm"] = norm_to_json(norm);
    if (g) {
        json samples = json::array(), jumps = json::array();
        for (const auto& s : g->samples()) samples.push_back({s.s, s.g});
        for (const auto& j : g->jumps()) jumps.push_back({j.s, j.height});
        out["g"] = {{"samples", samples}, {"jumps", jumps}};
    } else {
        auto atoms = [](const BoundaryMeasure& m) {
            json a = json::array();
            for (const auto& x : m.atoms()) a.push_back({x.s, x.mass, x.width});
            return a;
        };
        out["f_plus"] = atoms(f_plus);
        out["f_minus"] = atoms(f_minus);
    }
    out["grid"] = {{"nx", nx}, {"ny", ny}};
    out["quadrature"] = quadrature;
    out["seed"] = seed;
    return out;
}

}  // namespace lgt
