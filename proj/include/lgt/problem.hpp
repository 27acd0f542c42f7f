#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "lgt/geom.hpp"
#include "lgt/measures.hpp"

namespace lgt {

/// A validated problem file.
///
///   {
///     "domain": {"kind": "disk", "radius": R}
///             | {"kind": "ellipse", "a": A, "b": B}
///             | {"kind": "radial", "r0": r0, "cos": [...], "sin": [...]},
///     "norm": {"kind": "euclidean"} | {"kind": "lq", "q": q}
///           | {"kind": "quadratic", "A": [[a, b], [b, c]]},
///     "g": {"samples": [[s, g], ...], "jumps": [[s, h], ...]}
///       or "f_plus": [[s, m] or [s, m, width], ...], "f_minus": [...],
///     "grid": {"nx": 512, "ny": 512},
///     "quadrature": 1,
///     "seed": 0
///   }
///
/// Everything except the domain and the data is optional. Unknown keys are
/// rejected with SchemaError.
struct ProblemFile {
    Domain domain = Domain::disk(1.0);
    Norm norm = Norm::euclidean();
    std::optional<BoundaryDatum> g;
    BoundaryMeasure f_plus;
    BoundaryMeasure f_minus;
    int nx = 512;
    int ny = 512;
    int quadrature = 1;
    std::uint64_t seed = 0;

    /// f^+ and f^- with common mass removed; from g when present.
    SignedMeasure measures() const;
    /// The problem with all defaults filled in, in the input schema.
    nlohmann::json resolved() const;
};

ProblemFile parse_problem(const nlohmann::json& doc);
ProblemFile load_problem(const std::string& path);

nlohmann::json domain_to_json(const Domain& domain);
nlohmann::json norm_to_json(const Norm& norm);

/// A finite number, or the string "inf" for flagged infinities.
nlohmann::json number_or_inf(double value);

}  // namespace lgt
