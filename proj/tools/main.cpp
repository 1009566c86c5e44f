// leafspace: scenario-driven checks for incomplete infinitesimal group
// actions: path lifting through the graph foliation, recurrence and
// intersection sets, completion atlases, and the Hausdorff / properness /
// orbifold / Killing / slice / bundle decision procedures.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "leafspace/runner.hpp"
#include "leafspace/scenario_io.hpp"

namespace {

std::optional<leafspace::Vec> parse_point(const std::string& text) {
    if (text.empty()) return std::nullopt;
    leafspace::Vec v(0);
    std::stringstream ss(text);
    std::string part;
    std::vector<double> coords;
    while (std::getline(ss, part, ',')) coords.push_back(std::stod(part));
    return leafspace::Vec::from(coords);
}

void add_common(CLI::App* cmd, leafspace::RunConfig& cfg, std::string& at_text) {
    cmd->add_option("--scenario", cfg.scenario_file, "scenario JSON file");
    cmd->add_option("--n", cfg.n, "rotation order for disc scenarios (n > 2)");
    cmd->add_option("--group", cfg.group, "group model: circle | line");
    cmd->add_option("--budget-K", cfg.budget_K, "deck enumeration budget");
    cmd->add_option("--window-B", cfg.window_B, "group search window");
    cmd->add_option("--grid", cfg.grid_size, "atlas grid size");
    cmd->add_option("--samples", cfg.sample_count, "sample count for checks");
    cmd->add_option("--tol", cfg.tol, "tolerance override");
    cmd->add_option("--seed", cfg.seed, "random sample seed");
    cmd->add_option("--out", cfg.out_dir, "output directory for report.json and CSV artifacts");
    cmd->add_option("--at", at_text, "base point, comma-separated coordinates");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "leafspace: numerical laboratory for incomplete Lie algebra actions and their "
        "group completions (set LEAFSPACE_THREADS to cap parallelism)"};
    app.require_subcommand(1);

    leafspace::RunConfig cfg;
    std::string at_text;

    auto* lift = app.add_subcommand("lift", "lift a group path from a base point");
    add_common(lift, cfg, at_text);
    lift->add_option("--path-delta", cfg.path_delta, "group displacement of the straight path");
    lift->add_option("--example", cfg.example_name, "catalog scenario (default: wedge)");

    auto* rec = app.add_subcommand("recurrence", "compute the recurrence set I(e;e,x)");
    add_common(rec, cfg, at_text);
    rec->add_option("--example", cfg.example_name, "catalog scenario (default: wedge)");

    auto* atlas = app.add_subcommand("atlas", "build the sampled completion atlas");
    add_common(atlas, cfg, at_text);
    atlas->add_option("--example", cfg.example_name, "catalog scenario (default: wedge)");

    auto* check = app.add_subcommand("check", "run a named decision procedure");
    add_common(check, cfg, at_text);
    check->add_option("what", cfg.check, "hausdorff|proper|orbifold|killing|slice|bundle")
        ->required();
    check->add_option("--example", cfg.example_name, "catalog scenario (default: wedge)");

    auto* example = app.add_subcommand("example", "run a catalog scenario");
    add_common(example, cfg, at_text);
    example->add_option("name", cfg.example_name, "full_disc|wedge|wedge_plus_ray|translation_plane|affine_line")
        ->required();
    example->add_option("--check", cfg.check, "also run a named check");
    example->add_flag("--recurrence", cfg.want_recurrence, "compute recurrence at --at");
    example->add_flag("--lift", cfg.want_lift, "lift the default path at --at");
    example->add_flag("--atlas", cfg.want_atlas, "build the atlas");
    example->add_flag("--limit-elements", cfg.want_limit_elements,
                      "report limit elements near escape loci");
    example->add_option("--path-delta", cfg.path_delta, "group displacement for --lift");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    if (lift->parsed()) cfg.command = "lift";
    if (rec->parsed()) cfg.command = "recurrence";
    if (atlas->parsed()) cfg.command = "atlas";
    if (check->parsed()) cfg.command = "check";
    if (example->parsed()) cfg.command = "example";

    try {
        cfg.at = parse_point(at_text);
    } catch (const std::exception&) {
        std::cerr << "invalid --at point: " << at_text << "\n";
        return 2;
    }

    leafspace::RunResult result = leafspace::run(cfg);
    std::cout << result.report.dump(2) << "\n";
    return result.exit_code;
}
