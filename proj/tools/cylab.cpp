#include <CLI11.hpp>

#include <cstdio>

#include "cylab/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"numerical experiments for the glued cone metrics on the z + by + x1^2 + x2^2 + y^3 family"};
    app.require_subcommand(0);

    std::string experiment;
    std::string config_path;
    std::string radii;
    cylab::ExperimentConfig cfg;

    std::string names;
    for (const auto& n : cylab::experiment_names()) names += (names.empty() ? "" : ", ") + n;

    app.add_option("experiment", experiment, "one of: " + names)->required();
    app.add_option("--config", config_path, "key=value configuration file");
    auto* ob = app.add_option("--b", cfg.b, "family parameter b");
    auto* oa = app.add_option("--alpha", cfg.glue.alpha_glue, "gluing band exponent");
    auto* ok = app.add_option("--kappa", cfg.glue.kappa, "ray-distance threshold constant");
    auto* oP = app.add_option("--P", cfg.glue.P, "inner radius of the glued region");
    auto* oc = app.add_option("--psi-c", cfg.glue.psi_c, "model fiber correction amplitude");
    app.add_option("--radii", radii, "geometric radius schedule MIN:MAX:N");
    auto* os = app.add_option("--seed", cfg.seed, "sampling seed");
    auto* on = app.add_option("--samples", cfg.samples, "sample count override");
    auto* ow = app.add_option("--workers", cfg.workers, "worker count (1 = serial reference)");
    auto* oo = app.add_option("--out", cfg.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        cylab::ExperimentConfig parsed;
        if (!config_path.empty()) cylab::load_config_file(config_path, parsed);
        // Command-line values override the file.
        if (!ob->empty()) parsed.b = cfg.b;
        if (!oa->empty()) parsed.glue.alpha_glue = cfg.glue.alpha_glue;
        if (!ok->empty()) parsed.glue.kappa = cfg.glue.kappa;
        if (!oP->empty()) parsed.glue.P = cfg.glue.P;
        if (!oc->empty()) parsed.glue.psi_c = cfg.glue.psi_c;
        if (!os->empty()) parsed.seed = cfg.seed;
        if (!on->empty()) parsed.samples = cfg.samples;
        if (!ow->empty()) parsed.workers = cfg.workers;
        if (!oo->empty()) parsed.out_dir = cfg.out_dir;
        if (!radii.empty()) {
            const auto c1 = radii.find(':');
            const auto c2 = radii.find(':', c1 + 1);
            if (c1 == std::string::npos || c2 == std::string::npos)
                throw cylab::DomainError("--radii expects MIN:MAX:N");
            parsed.radii_min = std::stod(radii.substr(0, c1));
            parsed.radii_max = std::stod(radii.substr(c1 + 1, c2 - c1 - 1));
            parsed.radii_count = std::stoi(radii.substr(c2 + 1));
        }
        parsed.experiment = experiment;

        bool known = false;
        for (const auto& n : cylab::experiment_names()) known = known || n == experiment;
        if (!known) {
            std::fprintf(stderr, "unknown experiment '%s'; expected one of: %s\n",
                         experiment.c_str(), names.c_str());
            return 2;
        }

        const cylab::ExperimentOutcome out = cylab::run_experiment(parsed);
        std::printf("%s: %s\n  csv:  %s\n  json: %s\n", experiment.c_str(), out.message.c_str(),
                    out.csv_path.c_str(), out.json_path.c_str());
        return out.pass ? 0 : 1;
    } catch (const cylab::DomainError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "experiment failed: %s\n", e.what());
        return 1;
    }
}
