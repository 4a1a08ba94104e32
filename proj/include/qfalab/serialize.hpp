#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qfalab/automata.hpp"
#include "qfalab/decode.hpp"
#include "qfalab/entropy_lab.hpp"
#include "qfalab/rac.hpp"

namespace qfalab {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Matrices: {dim, re: row-major, im: row-major}.

inline json to_json(const ComplexMatrix& m) {
    std::vector<double> re, im;
    re.reserve(m.dim() * m.dim());
    im.reserve(m.dim() * m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) {
            re.push_back(m(i, j).real());
            im.push_back(m(i, j).imag());
        }
    return json{{"dim", m.dim()}, {"re", re}, {"im", im}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
    const std::size_t dim = j.at("dim").get<std::size_t>();
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (re.size() != dim * dim || im.size() != dim * dim)
        throw BadConfig("matrix entries do not match dim " +
                        std::to_string(dim));
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k)
            m(i, k) = cplx(re[i * dim + k], im[i * dim + k]);
    return m;
}

inline json to_json(const DensityMatrix& rho) {
    json j = to_json(rho.matrix());
    j["eigenvalues"] = rho.spectrum();
    return j;
}

inline DensityMatrix density_from_json(const json& j) {
    return validate_density(matrix_from_json(j));
}

// ---------------------------------------------------------------------------
// Channels.

inline json to_json(const ProjectiveMeasurement& meas) {
    json projectors = json::array();
    for (const ComplexMatrix& p : meas.projectors) projectors.push_back(to_json(p));
    return json{{"projectors", projectors}};
}

inline ProjectiveMeasurement measurement_from_json(const json& j) {
    std::vector<ComplexMatrix> projectors;
    for (const json& p : j.at("projectors")) projectors.push_back(matrix_from_json(p));
    return make_projective_measurement(projectors);
}

inline json to_json(const SuperoperatorStep& step) {
    if (std::holds_alternative<ComplexMatrix>(step))
        return json{{"type", "unitary"},
                    {"matrix", to_json(std::get<ComplexMatrix>(step))}};
    json projectors = json::array();
    for (const ComplexMatrix& p :
         std::get<ProjectiveMeasurement>(step).projectors)
        projectors.push_back(to_json(p));
    return json{{"type", "measure"}, {"projectors", projectors}};
}

inline SuperoperatorStep step_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "unitary") return matrix_from_json(j.at("matrix"));
    if (type == "measure") {
        std::vector<ComplexMatrix> projectors;
        for (const json& p : j.at("projectors"))
            projectors.push_back(matrix_from_json(p));
        return make_projective_measurement(projectors);
    }
    throw BadConfig("unknown superoperator step type '" + type + "'");
}

inline json to_json(const Superoperator& op) {
    json steps = json::array();
    for (const SuperoperatorStep& s : op.steps) steps.push_back(to_json(s));
    return json{{"dim", op.dim}, {"steps", steps}};
}

inline Superoperator superoperator_from_json(const json& j) {
    std::vector<SuperoperatorStep> steps;
    for (const json& s : j.at("steps")) steps.push_back(step_from_json(s));
    return make_superoperator(j.at("dim").get<std::size_t>(), std::move(steps));
}

inline json to_json(const BinaryObservable& obs) {
    json prepend = json::array();
    for (const SuperoperatorStep& s : obs.prepend) prepend.push_back(to_json(s));
    return json{{"prepend", prepend},
                {"outcome0", to_json(obs.outcome0)},
                {"outcome1", to_json(obs.outcome1)}};
}

inline BinaryObservable observable_from_json(const json& j) {
    std::vector<SuperoperatorStep> prepend;
    for (const json& s : j.at("prepend")) prepend.push_back(step_from_json(s));
    return make_binary_observable(std::move(prepend),
                                  matrix_from_json(j.at("outcome0")),
                                  matrix_from_json(j.at("outcome1")));
}

// ---------------------------------------------------------------------------
// Automata.

inline json to_json(const Dfa& dfa) {
    return json{{"states", dfa.states},
                {"start", dfa.start},
                {"accepting", dfa.accepting},
                {"delta", json{{"0", dfa.delta[0]}, {"1", dfa.delta[1]}}}};
}

inline Dfa dfa_from_json(const json& j) {
    return make_dfa(j.at("states").get<std::vector<std::string>>(),
                    j.at("start").get<std::size_t>(),
                    j.at("accepting").get<std::vector<bool>>(),
                    {j.at("delta").at("0").get<std::vector<std::size_t>>(),
                     j.at("delta").at("1").get<std::vector<std::size_t>>()});
}

inline std::string role_name(StateRole role) {
    switch (role) {
        case StateRole::accept: return "accept";
        case StateRole::reject: return "reject";
        default: return "non";
    }
}

inline StateRole role_from_name(const std::string& name) {
    if (name == "accept") return StateRole::accept;
    if (name == "reject") return StateRole::reject;
    if (name == "non") return StateRole::non_halting;
    throw BadConfig("unknown state role '" + name + "'");
}

inline json to_json(const QfaSpec& qfa) {
    json roles = json::array();
    for (StateRole r : qfa.roles) roles.push_back(role_name(r));
    return json{{"states", qfa.states},
                {"roles", roles},
                {"start", qfa.start},
                {"superoperators", json{{"lm", to_json(qfa.u_lm)},
                                        {"0", to_json(qfa.u0)},
                                        {"1", to_json(qfa.u1)},
                                        {"rm", to_json(qfa.u_rm)}}}};
}

inline QfaSpec qfa_from_json(const json& j) {
    std::vector<StateRole> roles;
    for (const json& r : j.at("roles"))
        roles.push_back(role_from_name(r.get<std::string>()));
    const json& ops = j.at("superoperators");
    return make_qfa(j.at("states").get<std::vector<std::string>>(),
                    std::move(roles), j.at("start").get<std::size_t>(),
                    superoperator_from_json(ops.at("lm")),
                    superoperator_from_json(ops.at("0")),
                    superoperator_from_json(ops.at("1")),
                    superoperator_from_json(ops.at("rm")));
}

// ---------------------------------------------------------------------------
// Random access codes: encodings keyed by bit string, observables keyed by
// 1-based index, with a nested suffix key in serial mode.

inline json to_json(const RandomAccessCode& code) {
    json encodings = json::object();
    for (std::size_t x = 0; x < code.encodings.size(); ++x)
        encodings[bits_of(x, code.n)] = to_json(code.encodings[x]);
    json observables = json::object();
    for (std::size_t i = 0; i < code.n; ++i) {
        const std::string key = std::to_string(i + 1);
        if (code.mode == RacMode::plain) {
            observables[key] = to_json(code.observables[i][0]);
        } else {
            json by_suffix = json::object();
            const std::size_t len = code.n - 1 - i;
            for (std::size_t s = 0; s < code.observables[i].size(); ++s)
                by_suffix[bits_of(s, len)] = to_json(code.observables[i][s]);
            observables[key] = by_suffix;
        }
    }
    return json{{"n", code.n},
                {"m", code.m},
                {"mode", code.mode == RacMode::plain ? "rac" : "serial"},
                {"encodings", encodings},
                {"observables", observables}};
}

inline RandomAccessCode rac_from_json(const json& j) {
    const std::size_t n = j.at("n").get<std::size_t>();
    const std::size_t m = j.at("m").get<std::size_t>();
    const std::string mode_name = j.at("mode").get<std::string>();
    RacMode mode;
    if (mode_name == "rac") mode = RacMode::plain;
    else if (mode_name == "serial") mode = RacMode::serial;
    else throw BadConfig("unknown rac mode '" + mode_name + "'");
    if (n == 0 || n > 10) throw BadConfig("rac json has n outside [1, 10]");

    std::vector<DensityMatrix> encodings;
    const json& enc = j.at("encodings");
    for (std::size_t x = 0; x < (std::size_t{1} << n); ++x) {
        const std::string key = bits_of(x, n);
        if (!enc.contains(key))
            throw BadConfig("missing encoding for '" + key + "'");
        encodings.push_back(density_from_json(enc.at(key)));
    }
    std::vector<std::vector<BinaryObservable>> observables(n);
    const json& obs = j.at("observables");
    for (std::size_t i = 0; i < n; ++i) {
        const std::string key = std::to_string(i + 1);
        if (!obs.contains(key))
            throw IncompleteObservableTable("missing observables for index " +
                                            key);
        if (mode == RacMode::plain) {
            observables[i].push_back(observable_from_json(obs.at(key)));
        } else {
            const std::size_t len = n - 1 - i;
            for (std::size_t s = 0; s < (std::size_t{1} << len); ++s) {
                const std::string skey = bits_of(s, len);
                if (!obs.at(key).contains(skey))
                    throw IncompleteObservableTable("missing observable for (" +
                                                    key + ", '" + skey + "')");
                observables[i].push_back(
                    observable_from_json(obs.at(key).at(skey)));
            }
        }
    }
    return make_rac(n, m, mode, std::move(encodings), std::move(observables));
}

// ---------------------------------------------------------------------------
// Reports.

inline json to_json(const RacVerification& v) {
    return json{
        {"p_min", v.p_min}, {"p_avg", v.p_avg}, {"per_pair", v.per_pair}};
}

inline json to_json(const LemmaMixReport& r) {
    return json{{"p", r.p},
                {"lhs", r.lhs},
                {"rhs", r.rhs},
                {"margin", r.margin},
                {"holds", r.holds}};
}

inline json to_json(const HolevoReport& r) {
    return json{{"chi", r.chi},
                {"mutual_information", r.mutual_information},
                {"margin", r.margin},
                {"holds", r.holds}};
}

inline json to_json(const FactSuiteReport& r) {
    return json{{"dim", r.dim},
                {"trials", r.trials},
                {"worst_bound_margin", r.worst_bound_margin},
                {"worst_unitary_drift", r.worst_unitary_drift},
                {"worst_measure_margin", r.worst_measure_margin},
                {"holds", r.holds}};
}

inline json to_json(const EntropyTrajectory& t) {
    json points = json::array();
    for (const TrajectoryPoint& p : t.points)
        points.push_back(json{{"k", p.k}, {"entropy", p.entropy}});
    return json{{"points", points}, {"p_claimed", t.p_claimed}};
}

inline json to_json(const GrowthReport& r) {
    return json{{"floor", r.floor},
                {"trajectory", to_json(r.trajectory)},
                {"margins", r.margins},
                {"min_margin", r.min_margin},
                {"holds", r.holds}};
}

inline json to_json(const RunResult& r) {
    json trace = json::array();
    for (const RunTraceEntry& e : r.per_symbol_trace)
        trace.push_back(json{{"symbol", e.symbol},
                             {"p_accept_cum", e.p_accept_cum},
                             {"p_reject_cum", e.p_reject_cum},
                             {"entropy_nonhalt", e.entropy_nonhalt}});
    return json{{"p_accept", r.p_accept},
                {"p_reject", r.p_reject},
                {"p_continue", r.p_continue},
                {"per_symbol_trace", trace}};
}

inline json to_json(const GeometricSummary& s) {
    return json{{"n", s.n},
                {"m", s.m},
                {"success", s.success},
                {"mutual_information", s.mutual_information},
                {"chi", s.chi},
                {"h_x_given_y", s.h_x_given_y},
                {"map_lower", s.map_lower},
                {"cap_upper", s.cap_upper},
                {"both_hold", s.both_hold}};
}

inline json to_json(const DecodeReport& r) {
    return json{{"success", r.success},
                {"map_lower", r.map_lower},
                {"cap_upper", r.cap_upper},
                {"both_hold", r.both_hold}};
}

inline json to_json(const RacBoundReport& r) {
    return json{{"holds", r.holds}, {"required_m", r.required_m}};
}

inline json to_json(const SuffixEntropyReport& r) {
    return json{
        {"entropy", r.entropy}, {"bound", r.bound}, {"holds", r.holds}};
}

}  // namespace qfalab
