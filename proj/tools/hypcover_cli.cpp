// hypcover: partial coverings of hyperbolic surfaces by closed geodesics.
//
// Usage:
//   hypcover trace    --group triangle246 --packet named:gamma3 --out DIR
//   hypcover cover    --group psl2z --packet disc:5 --out DIR
//   hypcover sweep    --packet disc:5 --packet disc:13 ... --partition 6,4,2,8
//   hypcover topology --group custom:data/torus_square.json
//
// Exit codes: 0 success, 1 usage, 2 computation error.

#include <CLI11.hpp>

#include <iostream>
#include <set>
#include <string>

#include "hypcover/cli.hpp"

int main(int argc, char** argv) {
    using namespace hypcover;
    CLI::App app{"Partial coverings of hyperbolic surfaces by closed geodesics"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string partition, config;
    auto* o_group = app.add_option("--group", cfg.group, "psl2z | triangle246 | custom:<path>");
    auto* o_packet = app.add_option("--packet", cfg.packets,
                                    "disc:D[:genus=...] | qorbit:q[:a,...] | traceball:T | matrices:<json> | "
                                    "word:<w> | named:gamma1..3 (repeatable)");
    auto* o_part = app.add_option("--partition", partition, "rows,cols,Y[,bins] (default 6,4,2,8)");
    auto* o_out = app.add_option("--out", cfg.out, "output directory");
    auto* o_seed = app.add_option("--seed", cfg.seed, "seed recorded in the reports");
    auto* o_eps = app.add_option("--eps-side", cfg.eps_side, "side tolerance");
    auto* o_prec = app.add_option("--precision", cfg.precision, "working precision in bits (0 = automatic)");
    auto* o_grid = app.add_option("--grid", cfg.grid, "multiplicity samples per axis for cover");
    auto* o_step = app.add_option("--step", cfg.step, "arc-length sampling step for sweep");
    app.add_option("--config", config, "flat key=value configuration file");
    app.fallthrough();

    auto* trace = app.add_subcommand("trace", "trace one geodesic: SVG of the lift and crossings JSON");
    auto* cover = app.add_subcommand("cover", "multiplicity heatmap, CSV grid and summary JSON");
    auto* sweep = app.add_subcommand("sweep", "equidistribution CSV report over several packets");
    auto* topo = app.add_subcommand("topology", "boundary graph, Betti number and genus");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (!config.empty()) {
            std::set<std::string> given;
            auto mark = [&](CLI::Option* o, const char* key) {
                if (o->count() > 0) given.insert(key);
            };
            mark(o_group, "group");
            mark(o_packet, "packet");
            mark(o_part, "partition");
            mark(o_out, "out");
            mark(o_seed, "seed");
            mark(o_eps, "eps_side");
            mark(o_prec, "precision");
            mark(o_grid, "grid");
            mark(o_step, "step");
            apply_config(cfg, parse_config_file(config), given);
        }
        if (!partition.empty()) cfg.partition = parse_partition(partition);
    } catch (const Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }
    default_tolerances().side = cfg.eps_side;

    bool usage_ok = true;
    if (*trace && cfg.packets.size() != 1) usage_ok = false;
    if ((*cover) && cfg.packets.empty()) usage_ok = false;
    if (*sweep && cfg.packets.size() < 2) usage_ok = false;
    if (!usage_ok) {
        std::cerr << "usage error: trace takes one --packet, cover at least one, sweep at least two\n";
        return 1;
    }

    try {
        if (*trace) return cmd_trace(cfg);
        if (*cover) return cmd_cover(cfg);
        if (*sweep) return cmd_sweep(cfg);
        if (*topo) return cmd_topology(cfg);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "InternalError: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
