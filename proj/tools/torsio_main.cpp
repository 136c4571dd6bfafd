#include <CLI11.hpp>

#include "torsio/cli.hpp"

int main(int argc, char** argv) {
    using torsio::RunConfig;
    RunConfig cfg;

    CLI::App app{"geometric torsion invariants of triangulated 3-manifolds"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "base random seed")->envname("TORSIO_SEED");
        sub->add_option("--out", cfg.out, "output file");
        sub->add_option("--report", cfg.report, "report JSON file");
    };

    CLI::App* inv = app.add_subcommand("invariant", "compute manifold invariants");
    inv->add_option("--manifold", cfg.manifold, "manifold file or builtin:NAME")->required();
    inv->add_option("--seeds", cfg.seeds, "number of placement seeds");
    inv->add_option("--tolerance", cfg.tolerance, "relative spread tolerance");
    add_common(inv);

    CLI::App* ver = app.add_subcommand("verify", "run a verification suite");
    ver->add_option("--suite", cfg.suite, "suite name or 'all'");
    ver->add_option("--seeds", cfg.seeds, "seed count hint");
    ver->add_option("--tolerance", cfg.tolerance, "tolerance override (reported only)");
    add_common(ver);

    CLI::App* fix = app.add_subcommand("fixtures", "write example manifolds and gluing maps");
    add_common(fix);

    CLI::App* glu = app.add_subcommand("glue", "glue manifolds and compare both sides");
    glu->add_option("--manifold", cfg.manifold, "first manifold")->required();
    glu->add_option("--manifold2", cfg.manifold2, "second manifold");
    glu->add_option("--map", cfg.map_path, "gluing map JSON")->required();
    glu->add_flag("--self-glue", cfg.self_glue_flag, "glue two components of one manifold");
    glu->add_flag("--transport", cfg.transport,
                  "move the second placement onto the first by a rigid motion");
    add_common(glu);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (inv->parsed()) return torsio::cmd_invariant(cfg, std::cout);
    if (ver->parsed()) return torsio::cmd_verify(cfg, std::cout);
    if (fix->parsed()) return torsio::cmd_fixtures(cfg, std::cout);
    if (glu->parsed()) {
        if (!cfg.self_glue_flag && cfg.manifold2.empty()) {
            std::cerr << "glue needs --manifold2 unless --self-glue is given\n";
            return 2;
        }
        return torsio::cmd_glue(cfg, std::cout);
    }
    return 2;
}
