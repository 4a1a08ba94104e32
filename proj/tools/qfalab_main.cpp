// qfalab: batch experiment runner. One process, one subcommand, file output.
// Exit codes: 0 all checked inequalities hold, 1 bound violated (report still
// written), 2 bad configuration.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qfalab/qfalab.hpp"

namespace {

int run(const qfalab::ExperimentConfig& cfg) {
    qfalab::ExperimentReport rep = qfalab::run_experiment(cfg);
    std::string body = cfg.format == "csv"
                           ? rep.csv
                           : qfalab::report_json(rep).dump(2) + "\n";
    if (cfg.out.empty()) {
        std::cout << body;
    } else {
        std::ofstream f(cfg.out);
        if (!f) throw qfalab::BadConfig("cannot write '" + cfg.out + "'");
        f << body;
    }
    return rep.verdict ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entropy bounds lab for quantum encodings and automata"};
    app.require_subcommand(1);

    qfalab::ExperimentConfig cfg;
    struct SubSpec {
        const char* name;
        const char* what;
    };
    const SubSpec subs[] = {
        {"facts", "entropy facts on random states: cap, invariance, growth"},
        {"lemma-mix", "mixing bound margins over random state pairs"},
        {"trajectory", "entropy growth of the prefix machine's averaged state"},
        {"rac-verify", "verify a random access code from --in or a fresh search"},
        {"rac-optimize", "see-saw search for a random access code"},
        {"rac-bound", "memory size bound for a claimed success rate"},
        {"decode-bounds", "decoder success sandwich over random ensembles"},
        {"geometric", "leading-ones code: exact success and information"},
    };
    for (const SubSpec& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.what);
        sub->add_option("--n", cfg.n, "problem size")
            ->each([&](const std::string&) { cfg.has_n = true; });
        sub->add_option("--m", cfg.m, "memory bits")
            ->each([&](const std::string&) { cfg.has_m = true; });
        sub->add_option("--p", cfg.p, "success probability")
            ->each([&](const std::string&) { cfg.has_p = true; });
        sub->add_option("--dim", cfg.dim, "state dimension")
            ->each([&](const std::string&) { cfg.has_dim = true; });
        sub->add_option("--trials", cfg.trials, "randomized trial count")
            ->each([&](const std::string&) { cfg.has_trials = true; });
        sub->add_option("--seed", cfg.seed, "rng seed, required when randomized")
            ->each([&](const std::string&) { cfg.has_seed = true; });
        sub->add_option("--tol", cfg.tol, "stop threshold")
            ->each([&](const std::string&) { cfg.has_tol = true; });
        sub->add_option("--objective", cfg.objective, "search objective")
            ->check(CLI::IsMember({"worst", "avg"}));
        sub->add_option("--format", cfg.format, "report format")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", cfg.out, "write the report to this file");
        sub->add_option("--in", cfg.in, "read a code from this JSON file");
        sub->callback([&cfg, name = s.name]() { cfg.subcommand = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        return run(cfg);
    } catch (const qfalab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
