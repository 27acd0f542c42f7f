// Command-line front end: lgt <solve|density|lp-norm|bound|lsg|cex> [flags]

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lgt/commands.hpp"
#include "lgt/error.hpp"
#include "lgt/output.hpp"
#include "lgt/problem.hpp"
#include "lgt/version.hpp"

namespace {

int emit(const lgt::CommandResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    for (const auto& [name, contents] : result.files) {
        lgt::write_file((fs::path(out_dir) / name).string(), contents);
    }
    const std::string report = lgt::dump_json(result.report);
    lgt::write_file((fs::path(out_dir) / "report.json").string(), report);
    std::cout << report;
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary-to-boundary optimal transport and least-gradient lab"};
    app.set_version_flag("--version", lgt::kVersion);
    app.require_subcommand(1);

    std::string problem_path, out_dir = ".";
    std::optional<int> grid;
    std::optional<std::uint64_t> seed;
    lgt::CommandOptions opts;

    auto add_common = [&](CLI::App* sub, bool needs_problem) {
        if (needs_problem) sub->add_option("--problem", problem_path, "Problem file (JSON)")->required();
        sub->add_option("--grid", grid, "Grid cells along the longer side of the domain box");
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--seed", seed, "Seed overriding the problem file");
        sub->add_flag("--svg", opts.svg, "Also write an SVG plot");
    };

    auto* solve = app.add_subcommand("solve", "Solve the Kantorovich problem and write plan.json");
    add_common(solve, true);

    auto* density = app.add_subcommand("density", "Deposit the partial transport density");
    add_common(density, true);
    density->add_option("--tau", opts.tau, "Interpolation horizon in (0, 1]");
    density->add_flag("--pgm", opts.pgm, "Also write an 8-bit PGM preview");

    auto* lpnorm = app.add_subcommand("lp-norm", "L^p norm of the partial transport density");
    add_common(lpnorm, true);
    lpnorm->add_option("--p", opts.p, "Exponent (>= 1, or inf)");
    lpnorm->add_option("--tau", opts.tau, "Interpolation horizon in (0, 1]");

    auto* bound = app.add_subcommand("bound", "Factors of the L^p bound and the empirical ratio");
    add_common(bound, true);
    bound->add_option("--p", opts.p, "Exponent (> 1)");
    bound->add_option("--tau", opts.tau, "Interpolation horizon in (0, 1]");

    auto* lsg = app.add_subcommand("lsg", "Reconstruct the least-gradient solution from g");
    add_common(lsg, true);
    lsg->add_option("--p", opts.p, "Extra exponent for the reported density norms");

    auto* cex = app.add_subcommand("cex", "Alternating-arc counter-example on the unit disk");
    add_common(cex, false);
    cex->add_option("--pairs", opts.pairs, "Number of arc pairs");
    cex->add_option("--p", opts.p, "Exponent");
    cex->add_option("--mode", opts.mode, "exact or grid")->check(CLI::IsMember({"exact", "grid"}));
    cex->add_option("--atoms", opts.atoms, "Grid mode: atoms per arc");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return lgt::kSchema;
    }

    opts.grid = grid;
    opts.seed = seed;
    try {
        if (cex->parsed()) return emit(lgt::run_cex(opts), out_dir);
        const lgt::ProblemFile problem = lgt::load_problem(problem_path);
        if (solve->parsed()) return emit(lgt::run_solve(problem, opts), out_dir);
        if (density->parsed()) return emit(lgt::run_density(problem, opts), out_dir);
        if (lpnorm->parsed()) return emit(lgt::run_lp_norm(problem, opts), out_dir);
        if (bound->parsed()) return emit(lgt::run_bound(problem, opts), out_dir);
        if (lsg->parsed()) return emit(lgt::run_lsg(problem, opts), out_dir);
    } catch (const lgt::SchemaError& e) {
        std::cerr << "lgt: schema error: " << e.what() << "\n";
        return lgt::kSchema;
    } catch (const lgt::InfeasibleError& e) {
        std::cerr << "lgt: infeasible: " << e.what() << "\n";
        return lgt::kInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "lgt: internal error: " << e.what() << "\n";
        return lgt::kInternal;
    }
    return lgt::kInternal;
}
