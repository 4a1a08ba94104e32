#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qfalab/serialize.hpp"

namespace qfalab {

// ---------------------------------------------------------------------------
// Batch experiment runner shared by the CLI and the acceptance suite. The
// payload (config + result + verdict) is a pure function of the config, so
// reruns with the same seed are byte-identical; duration_ms sits outside it.

struct ExperimentConfig {
    std::string subcommand;
    std::size_t n = 0;
    bool has_n = false;
    std::size_t m = 0;
    bool has_m = false;
    double p = 0.0;
    bool has_p = false;
    std::size_t dim = 0;
    bool has_dim = false;
    std::size_t trials = 0;
    bool has_trials = false;
    std::uint64_t seed = 0;
    bool has_seed = false;
    double tol = 0.0;
    bool has_tol = false;
    std::string objective;  // "worst" | "avg"
    std::string format = "json";
    std::string out;  // empty: standard output
    std::string in;   // rac-verify: code file
};

struct ExperimentReport {
    json config;
    json result;
    bool verdict = false;
    std::string csv;
    double duration_ms = 0.0;
};

inline json payload_json(const ExperimentReport& rep) {
    return json{{"config", rep.config},
                {"result", rep.result},
                {"verdict", rep.verdict ? "pass" : "fail"}};
}

inline json report_json(const ExperimentReport& rep) {
    json j = payload_json(rep);
    j["duration_ms"] = rep.duration_ms;
    return j;
}

namespace detail {

inline std::string csv_num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline void require_seed(const ExperimentConfig& cfg) {
    if (!cfg.has_seed)
        throw BadConfig("subcommand '" + cfg.subcommand +
                        "' is randomized and needs --seed");
}

inline RacObjective parse_objective(const std::string& name) {
    if (name.empty() || name == "worst") return RacObjective::worst_case;
    if (name == "avg") return RacObjective::average;
    throw BadConfig("objective must be 'worst' or 'avg', got '" + name + "'");
}

// --- facts -----------------------------------------------------------------

inline ExperimentReport run_facts(const ExperimentConfig& cfg) {
    require_seed(cfg);
    const std::size_t dim = cfg.has_dim ? cfg.dim : 2;
    const std::size_t trials = cfg.has_trials ? cfg.trials : 200;

    FactSuiteReport fact = fact_suite(dim, trials, cfg.seed);

    ExperimentReport rep;
    rep.config = json{{"subcommand", "facts"},
                      {"dim", dim},
                      {"trials", trials},
                      {"seed", cfg.seed}};
    rep.result = to_json(fact);
    rep.verdict = fact.holds;
    rep.csv =
        "dim,trials,worst_bound_margin,worst_unitary_drift,worst_measure_margin,"
        "holds\n" +
        std::to_string(dim) + "," + std::to_string(trials) + "," +
        csv_num(fact.worst_bound_margin) + "," +
        csv_num(fact.worst_unitary_drift) + "," +
        csv_num(fact.worst_measure_margin) + "," +
        (fact.holds ? "1" : "0") + "\n";
    return rep;
}

// --- lemma-mix ---------------------------------------------------------------

inline ExperimentReport run_lemma_mix(const ExperimentConfig& cfg) {
    require_seed(cfg);
    const std::size_t dim = cfg.has_dim ? cfg.dim : 2;
    const std::size_t trials = cfg.has_trials ? cfg.trials : 200;
    if (dim < 2) throw BadConfig("lemma-mix needs dim >= 2");

    json rows = json::array();
    std::string csv = "trial,observable,p,lhs,rhs,margin,holds\n";
    std::size_t violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t st = mix_seed(cfg.seed, t);
        DensityMatrix s0 = random_density(dim, mix_seed(st, 1));
        DensityMatrix s1 = random_density(dim, mix_seed(st, 2));
        const BinaryObservable helstrom = helstrom_observable(s0, s1).observable;
        const BinaryObservable random_obs =
            random_binary_observable(dim, mix_seed(st, 3));
        const char* names[2] = {"helstrom", "random"};
        const BinaryObservable* obs[2] = {&helstrom, &random_obs};
        for (int o = 0; o < 2; ++o) {
            LemmaMixReport r = lemma_mix_check(s0, s1, *obs[o]);
            if (!r.holds) ++violations;
            min_margin = std::min(min_margin, r.margin);
            rows.push_back(json{{"trial", t},
                                {"observable", names[o]},
                                {"p", r.p},
                                {"lhs", r.lhs},
                                {"rhs", r.rhs},
                                {"margin", r.margin},
                                {"holds", r.holds}});
            csv += std::to_string(t) + "," + names[o] + "," + csv_num(r.p) +
                   "," + csv_num(r.lhs) + "," + csv_num(r.rhs) + "," +
                   csv_num(r.margin) + "," + (r.holds ? "1" : "0") + "\n";
        }
    }

    ExperimentReport rep;
    rep.config = json{{"subcommand", "lemma-mix"},
                      {"dim", dim},
                      {"trials", trials},
                      {"seed", cfg.seed}};
    rep.result = json{{"trials", trials},
                      {"violations", violations},
                      {"min_margin", min_margin},
                      {"rows", rows}};
    rep.verdict = violations == 0;
    rep.csv = std::move(csv);
    return rep;
}

// --- trajectory --------------------------------------------------------------

inline ExperimentReport run_trajectory(const ExperimentConfig& cfg) {
    const std::size_t n = cfg.has_n ? cfg.n : 4;
    const double p = cfg.has_p ? cfg.p : 1.0;

    QfaSpec qfa = prefix_qfa_for_ln(n);
    GrowthReport growth = check_entropy_growth(qfa, p, n + 1);

    ExperimentReport rep;
    rep.config = json{{"subcommand", "trajectory"}, {"n", n}, {"p", p}};
    rep.result = to_json(growth);
    rep.verdict = growth.holds;
    rep.csv = "k,entropy,floor_times_k,margin\n";
    for (std::size_t i = 0; i < growth.trajectory.points.size(); ++i) {
        const TrajectoryPoint& pt = growth.trajectory.points[i];
        rep.csv += std::to_string(pt.k) + "," + csv_num(pt.entropy) + "," +
                   csv_num(growth.floor * double(pt.k)) + "," +
                   csv_num(growth.margins[i]) + "\n";
    }
    return rep;
}

// --- rac helpers -------------------------------------------------------------

inline json rac_check_json(const RandomAccessCode& code,
                           const RacVerification& v, bool& verdict_out) {
    // The size bound is stated for p >= 1/2; weaker codes get the trivial
    // bound at p = 1/2.
    const double p_used = std::max(v.p_min, 0.5);
    RacBoundReport bound = rac_bound_check(code.n, code.m, p_used);

    bool suffix_all = true;
    double suffix_min_margin = std::numeric_limits<double>::infinity();
    std::size_t checked = 0;
    for (std::size_t k = 0; k <= code.n; ++k)
        for (std::size_t s = 0; s < (std::size_t{1} << k); ++s) {
            SuffixEntropyReport r =
                suffix_mixture_entropy(code, bits_of(s, k), v.p_min);
            suffix_all = suffix_all && r.holds;
            suffix_min_margin = std::min(suffix_min_margin, r.entropy - r.bound);
            ++checked;
        }

    verdict_out = bound.holds && suffix_all;
    return json{{"verification", to_json(v)},
                {"bound", json{{"p_used", p_used},
                               {"required_m", bound.required_m},
                               {"holds", bound.holds}}},
                {"suffix_sweep", json{{"suffixes_checked", checked},
                                      {"all_hold", suffix_all},
                                      {"min_margin", suffix_min_margin}}}};
}

inline std::string rac_csv(const RandomAccessCode& code,
                           const RacVerification& v) {
    std::string csv = "x,i,success\n";
    for (std::size_t x = 0; x < v.per_pair.size(); ++x)
        for (std::size_t i = 0; i < code.n; ++i)
            csv += bits_of(x, code.n) + "," + std::to_string(i + 1) + "," +
                   csv_num(v.per_pair[x][i]) + "\n";
    return csv;
}

// --- rac-verify --------------------------------------------------------------

inline ExperimentReport run_rac_verify(const ExperimentConfig& cfg) {
    RandomAccessCode code;
    json config = json{{"subcommand", "rac-verify"}};
    if (!cfg.in.empty()) {
        std::ifstream f(cfg.in);
        if (!f) throw BadConfig("cannot open code file '" + cfg.in + "'");
        json j = json::parse(f, nullptr, true);
        // Accept either a bare code or a rac-optimize report wrapping one.
        if (!j.contains("encodings") && j.contains("result") &&
            j["result"].contains("code"))
            j = j["result"]["code"];
        code = rac_from_json(j);
        config["in"] = cfg.in;
    } else {
        require_seed(cfg);
        const std::size_t n = cfg.has_n ? cfg.n : 2;
        const std::size_t m = cfg.has_m ? cfg.m : 1;
        const RacObjective objective = parse_objective(cfg.objective);
        code = seesaw_optimize(n, m, objective, cfg.seed);
        config["n"] = n;
        config["m"] = m;
        config["objective"] =
            objective == RacObjective::average ? "avg" : "worst";
        config["seed"] = cfg.seed;
    }

    RacVerification v = verify_rac(code);
    ExperimentReport rep;
    rep.config = std::move(config);
    rep.result = rac_check_json(code, v, rep.verdict);
    rep.result["n"] = code.n;
    rep.result["m"] = code.m;
    rep.result["mode"] = code.mode == RacMode::plain ? "rac" : "serial";
    rep.csv = rac_csv(code, v);
    return rep;
}

// --- rac-optimize ------------------------------------------------------------

inline ExperimentReport run_rac_optimize(const ExperimentConfig& cfg) {
    require_seed(cfg);
    const std::size_t n = cfg.has_n ? cfg.n : 2;
    const std::size_t m = cfg.has_m ? cfg.m : 1;
    const RacObjective objective = parse_objective(cfg.objective);
    const double tol = cfg.has_tol ? cfg.tol : 1e-7;

    RandomAccessCode code = seesaw_optimize(n, m, objective, cfg.seed, 500, tol);
    RacVerification v = verify_rac(code);

    ExperimentReport rep;
    rep.config = json{
        {"subcommand", "rac-optimize"},
        {"n", n},
        {"m", m},
        {"objective", objective == RacObjective::average ? "avg" : "worst"},
        {"seed", cfg.seed},
        {"tol", tol}};
    rep.result = rac_check_json(code, v, rep.verdict);
    rep.result["code"] = to_json(code);
    rep.csv = rac_csv(code, v);
    return rep;
}

// --- rac-bound ---------------------------------------------------------------

inline ExperimentReport run_rac_bound(const ExperimentConfig& cfg) {
    if (!cfg.has_n || !cfg.has_m || !cfg.has_p)
        throw BadConfig("rac-bound needs --n, --m and --p");
    RacBoundReport bound = rac_bound_check(cfg.n, cfg.m, cfg.p);

    ExperimentReport rep;
    rep.config = json{{"subcommand", "rac-bound"},
                      {"n", cfg.n},
                      {"m", cfg.m},
                      {"p", cfg.p}};
    rep.result = to_json(bound);
    rep.verdict = bound.holds;
    rep.csv = "n,m,p,required_m,holds\n" + std::to_string(cfg.n) + "," +
              std::to_string(cfg.m) + "," + csv_num(cfg.p) + "," +
              csv_num(bound.required_m) + "," + (bound.holds ? "1" : "0") +
              "\n";
    return rep;
}

// --- decode-bounds -----------------------------------------------------------

inline ExperimentReport run_decode_bounds(const ExperimentConfig& cfg) {
    require_seed(cfg);
    const std::size_t trials = cfg.has_trials ? cfg.trials : 200;
    const std::size_t label_bits = cfg.has_n ? cfg.n : 4;
    const std::size_t max_m = cfg.has_m ? cfg.m : 3;
    if (label_bits == 0 || label_bits > 4 || max_m == 0 || max_m > 3)
        throw BadConfig("decode-bounds needs 1 <= n <= 4 and 1 <= m <= 3");

    json rows = json::array();
    std::string csv = "trial,labels,m,success,map_lower,cap_upper,ok\n";
    std::size_t violations = 0;
    double min_lower = std::numeric_limits<double>::infinity();
    double min_upper = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t st = mix_seed(cfg.seed, t);
        Rng rng(st);
        const std::size_t labels =
            2 + rng.index((std::size_t{1} << label_bits) - 1);
        const std::size_t m = 1 + rng.index(max_m);
        const std::size_t dim = std::size_t{1} << m;
        Ensemble ens = random_ensemble(labels, dim, mix_seed(st, 1));
        const std::size_t outcomes = 2 + rng.index(dim - 1);
        ProjectiveMeasurement meas =
            random_projective_measurement(dim, outcomes, mix_seed(st, 2));

        JointDistribution joint = build_joint(ens, meas);
        DecoderTable table = map_decoder(joint);
        DecodeReport r = decode_report(joint, table, m, true);
        if (!r.both_hold) ++violations;
        min_lower = std::min(min_lower, r.success - r.map_lower);
        min_upper = std::min(min_upper, r.cap_upper - r.success);
        rows.push_back(json{{"trial", t},
                            {"labels", labels},
                            {"m", m},
                            {"success", r.success},
                            {"map_lower", r.map_lower},
                            {"cap_upper", r.cap_upper},
                            {"ok", r.both_hold}});
        csv += std::to_string(t) + "," + std::to_string(labels) + "," +
               std::to_string(m) + "," + csv_num(r.success) + "," +
               csv_num(r.map_lower) + "," + csv_num(r.cap_upper) + "," +
               (r.both_hold ? "1" : "0") + "\n";
    }

    ExperimentReport rep;
    rep.config = json{{"subcommand", "decode-bounds"},
                      {"n", label_bits},
                      {"m", max_m},
                      {"trials", trials},
                      {"seed", cfg.seed}};
    rep.result = json{{"trials", trials},
                      {"violations", violations},
                      {"min_lower_margin", min_lower},
                      {"min_upper_margin", min_upper},
                      {"rows", rows}};
    rep.verdict = violations == 0;
    rep.csv = std::move(csv);
    return rep;
}

// --- geometric ---------------------------------------------------------------

inline ExperimentReport run_geometric(const ExperimentConfig& cfg) {
    const std::size_t n = cfg.has_n ? cfg.n : 4;
    const double tol = cfg.has_tol ? cfg.tol : 1e-9;

    json rows = json::array();
    std::string csv = "n,success,mutual_information,chi,map_lower,cap_upper\n";
    bool all_ok = true;
    for (std::size_t k = 1; k <= n; ++k) {
        GeometricSummary s = geometric_example(k).summary;
        const double expect_success = double(k + 1) * std::exp2(-double(k));
        const double expect_info = 2.0 - std::exp2(1.0 - double(k));
        const double success_delta = std::abs(s.success - expect_success);
        const double info_delta = std::abs(s.mutual_information - expect_info);
        const double qubit_bound = std::log2(double(k + 1));
        all_ok = all_ok && s.both_hold && success_delta <= tol &&
                 info_delta <= tol;
        json row = to_json(s);
        row["success_delta"] = success_delta;
        row["info_delta"] = info_delta;
        row["qubit_bound"] = qubit_bound;
        rows.push_back(row);
        csv += std::to_string(k) + "," + csv_num(s.success) + "," +
               csv_num(s.mutual_information) + "," + csv_num(s.chi) + "," +
               csv_num(s.map_lower) + "," + csv_num(s.cap_upper) + "\n";
    }

    ExperimentReport rep;
    rep.config = json{{"subcommand", "geometric"}, {"n", n}, {"tol", tol}};
    rep.result = json{{"table", rows}};
    rep.verdict = all_ok;
    rep.csv = std::move(csv);
    return rep;
}

}  // namespace detail

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport rep;
    if (cfg.subcommand == "facts") rep = detail::run_facts(cfg);
    else if (cfg.subcommand == "lemma-mix") rep = detail::run_lemma_mix(cfg);
    else if (cfg.subcommand == "trajectory") rep = detail::run_trajectory(cfg);
    else if (cfg.subcommand == "rac-verify") rep = detail::run_rac_verify(cfg);
    else if (cfg.subcommand == "rac-optimize") rep = detail::run_rac_optimize(cfg);
    else if (cfg.subcommand == "rac-bound") rep = detail::run_rac_bound(cfg);
    else if (cfg.subcommand == "decode-bounds") rep = detail::run_decode_bounds(cfg);
    else if (cfg.subcommand == "geometric") rep = detail::run_geometric(cfg);
    else throw BadConfig("unknown subcommand '" + cfg.subcommand + "'");
    const auto end = std::chrono::steady_clock::now();
    rep.duration_ms =
        std::chrono::duration<double, std::milli>(end - start).count();
    return rep;
}

}  // namespace qfalab
