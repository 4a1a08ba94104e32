#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "qfalab/channels.hpp"

namespace qfalab {

// ---------------------------------------------------------------------------
// Language L_n = { w0 : w in {0,1}*, |w| <= n }.

inline void check_word(const std::string& word) {
    for (char c : word)
        if (c != '0' && c != '1')
            throw std::invalid_argument("word containing '" + std::string(1, c) +
                                        "' is not over {0,1}");
}

inline bool ln_member(const std::string& word, std::size_t n) {
    check_word(word);
    return !word.empty() && word.size() <= n + 1 && word.back() == '0';
}

// ---------------------------------------------------------------------------
// Deterministic automata.

struct Dfa {
    std::vector<std::string> states;
    std::size_t start = 0;
    std::vector<bool> accepting;
    std::array<std::vector<std::size_t>, 2> delta;  // delta[bit][state]
};

inline Dfa make_dfa(std::vector<std::string> states, std::size_t start,
                    std::vector<bool> accepting,
                    std::array<std::vector<std::size_t>, 2> delta) {
    const std::size_t n = states.size();
    if (n == 0) throw BadConfig("dfa needs at least one state");
    if (start >= n) throw BadConfig("dfa start state out of range");
    if (accepting.size() != n || delta[0].size() != n || delta[1].size() != n)
        throw DimensionMismatch("dfa table sizes disagree with state count " +
                                std::to_string(n));
    for (int b = 0; b < 2; ++b)
        for (std::size_t s = 0; s < n; ++s)
            if (delta[b][s] >= n)
                throw BadConfig("dfa transition out of range at state " +
                                states[s]);
    return Dfa{std::move(states), start, std::move(accepting), std::move(delta)};
}

inline bool dfa_accepts(const Dfa& dfa, const std::string& word) {
    check_word(word);
    std::size_t s = dfa.start;
    for (char c : word) s = dfa.delta[c - '0'][s];
    return dfa.accepting[s];
}

// Minimal-flavor DFA for L_n: a capped length counter crossed with the last
// symbol, plus a dead state. Exactly 2n + 4 states.
inline Dfa dfa_for_ln(std::size_t n) {
    const std::size_t count = 2 * n + 4;
    const std::size_t dead = count - 1;
    auto idx = [](std::size_t len, int last) { return 1 + 2 * (len - 1) + last; };

    std::vector<std::string> states(count);
    std::vector<bool> accepting(count, false);
    std::array<std::vector<std::size_t>, 2> delta{
        std::vector<std::size_t>(count), std::vector<std::size_t>(count)};

    states[0] = "init";
    states[dead] = "dead";
    for (std::size_t len = 1; len <= n + 1; ++len)
        for (int last = 0; last < 2; ++last) {
            states[idx(len, last)] =
                "len" + std::to_string(len) + "_last" + std::to_string(last);
            if (last == 0) accepting[idx(len, last)] = true;
        }

    for (int b = 0; b < 2; ++b) {
        delta[b][0] = idx(1, b);
        delta[b][dead] = dead;
        for (std::size_t len = 1; len <= n + 1; ++len)
            for (int last = 0; last < 2; ++last)
                delta[b][idx(len, last)] =
                    (len + 1 <= n + 1) ? idx(len + 1, b) : dead;
    }
    return make_dfa(std::move(states), 0, std::move(accepting), std::move(delta));
}

namespace detail {

// Bit strings of length 0..max_len in shortlex order; "" renders as "eps".
inline std::vector<std::string> prefix_strings(std::size_t max_len) {
    std::vector<std::string> out;
    for (std::size_t len = 0; len <= max_len; ++len)
        for (std::size_t v = 0; v < (std::size_t{1} << len); ++v) {
            std::string s(len, '0');
            for (std::size_t i = 0; i < len; ++i)
                if (v & (std::size_t{1} << (len - 1 - i))) s[i] = '1';
            out.push_back(s);
        }
    return out;
}

inline std::string prefix_name(const std::string& s) {
    return s.empty() ? "eps" : s;
}

}  // namespace detail

// Reversible prefix-memory DFA: states are all bit strings of length <= n+1
// plus an overflow flag; every symbol acts as a permutation. Agrees with
// ln_member on words of length <= n+1; the completion past full-length
// prefixes is an arbitrary fixed permutation, so longer words are out of
// contract here.
inline Dfa prefix_memory_dfa(std::size_t n) {
    std::vector<std::string> prefixes = detail::prefix_strings(n + 1);
    const std::size_t tree = prefixes.size();
    const std::size_t ovf = tree;
    const std::size_t count = tree + 1;

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < tree; ++i) index[prefixes[i]] = i;

    std::vector<std::string> states(count);
    for (std::size_t i = 0; i < tree; ++i) states[i] = detail::prefix_name(prefixes[i]);
    states[ovf] = "ovf";

    std::vector<bool> accepting(count, false);
    for (std::size_t i = 0; i < tree; ++i)
        accepting[i] = ln_member(prefixes[i], n);

    std::array<std::vector<std::size_t>, 2> delta{
        std::vector<std::size_t>(count, count), std::vector<std::size_t>(count, count)};
    for (int b = 0; b < 2; ++b) {
        std::vector<bool> used(count, false);
        for (std::size_t i = 0; i < tree; ++i) {
            if (prefixes[i].size() > n) continue;
            std::size_t to = index[prefixes[i] + char('0' + b)];
            delta[b][i] = to;
            used[to] = true;
        }
        // Length-(n+1) strings and ovf map onto the leftover slots in order.
        std::vector<std::size_t> free_slots;
        for (std::size_t t = 0; t < count; ++t)
            if (!used[t]) free_slots.push_back(t);
        std::size_t next = 0;
        for (std::size_t i = 0; i < count; ++i)
            if (delta[b][i] == count) delta[b][i] = free_slots[next++];
    }
    return make_dfa(std::move(states), index[""], std::move(accepting),
                    std::move(delta));
}

// ---------------------------------------------------------------------------
// Enhanced one-way quantum finite automata.

enum class StateRole { accept, reject, non_halting };

struct QfaSpec {
    std::vector<std::string> states;
    std::vector<StateRole> roles;
    std::size_t start = 0;
    Superoperator u_lm, u0, u1, u_rm;

    std::size_t dim() const { return states.size(); }
};

inline QfaSpec make_qfa(std::vector<std::string> states,
                        std::vector<StateRole> roles, std::size_t start,
                        Superoperator u_lm, Superoperator u0, Superoperator u1,
                        Superoperator u_rm) {
    const std::size_t d = states.size();
    if (d == 0) throw BadConfig("qfa needs at least one basis state");
    if (roles.size() != d)
        throw DimensionMismatch("role count " + std::to_string(roles.size()) +
                                " vs state count " + std::to_string(d));
    if (start >= d || roles[start] != StateRole::non_halting)
        throw BadConfig("start state must be a non-halting state");
    {
        std::vector<std::string> sorted = states;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw BadConfig("qfa state names must be unique");
    }
    for (const Superoperator* op : {&u_lm, &u0, &u1, &u_rm})
        if (op->dim != d)
            throw DimensionMismatch("superoperator dim " +
                                    std::to_string(op->dim) + " vs state count " +
                                    std::to_string(d));
    return QfaSpec{std::move(states), std::move(roles), start, std::move(u_lm),
                   std::move(u0),     std::move(u1),    std::move(u_rm)};
}

// Basis-permutation unitary: column j carries e_{perm[j]}.
inline ComplexMatrix permutation_unitary(const std::vector<std::size_t>& perm) {
    ComplexMatrix u(perm.size());
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t j = 0; j < perm.size(); ++j) {
        if (perm[j] >= perm.size() || seen[perm[j]])
            throw BadConfig("permutation is not a bijection");
        seen[perm[j]] = true;
        u(perm[j], j) = 1.0;
    }
    return u;
}

// Lift of a reversible DFA: live and halted copies of every state, letters
// act on both copies, the right marker swaps live with halted.
inline QfaSpec lift_dfa(const Dfa& dfa) {
    const std::size_t n = dfa.states.size();
    for (int b = 0; b < 2; ++b) {
        std::vector<std::size_t> source(n, n);
        for (std::size_t s = 0; s < n; ++s) {
            std::size_t t = dfa.delta[b][s];
            if (source[t] != n)
                throw NotReversible("symbol " + std::to_string(b) +
                                    " merges states " + dfa.states[source[t]] +
                                    " and " + dfa.states[s] + " into " +
                                    dfa.states[t]);
            source[t] = s;
        }
    }

    const std::size_t dim = 2 * n;
    std::vector<std::string> states(dim);
    std::vector<StateRole> roles(dim);
    for (std::size_t s = 0; s < n; ++s) {
        states[s] = dfa.states[s];
        roles[s] = StateRole::non_halting;
        states[n + s] = dfa.states[s] + "#h";
        roles[n + s] = dfa.accepting[s] ? StateRole::accept : StateRole::reject;
    }

    auto letter = [&](int b) {
        std::vector<std::size_t> perm(dim);
        for (std::size_t s = 0; s < n; ++s) {
            perm[s] = dfa.delta[b][s];
            perm[n + s] = n + dfa.delta[b][s];
        }
        return make_superoperator(dim, {permutation_unitary(perm)});
    };
    std::vector<std::size_t> swap_perm(dim);
    for (std::size_t s = 0; s < n; ++s) {
        swap_perm[s] = n + s;
        swap_perm[n + s] = s;
    }
    Superoperator u_lm = make_superoperator(dim, {ComplexMatrix::identity(dim)});
    Superoperator u_rm = make_superoperator(dim, {permutation_unitary(swap_perm)});

    return make_qfa(std::move(states), std::move(roles), dfa.start,
                    std::move(u_lm), letter(0), letter(1), std::move(u_rm));
}

// Reversible prefix-memory automaton for L_n. Basis states are all bit
// strings of length <= n+1 plus an overflow flag, each doubled into a live
// and a halted copy; letters append (permutation unitaries), the right marker
// swaps live with halted. A word that outgrows the tree moves straight into
// halted reject partners, so words longer than n+1 are rejected with
// certainty and no halting occurs through the first n+1 letters.
inline QfaSpec prefix_qfa_for_ln(std::size_t n) {
    if (n > 10)
        throw TooLarge("prefix automaton for n = " + std::to_string(n) +
                       " exceeds the n <= 10 cap");
    std::vector<std::string> prefixes = detail::prefix_strings(n + 1);
    const std::size_t tree = prefixes.size();       // 2^{n+2} - 1
    const std::size_t live_ovf = tree;
    const std::size_t live_count = tree + 1;
    const std::size_t dim = 2 * live_count;         // 2(2^{n+2} - 1) + 2
    auto halted = [&](std::size_t live) { return live_count + live; };

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < tree; ++i) index[prefixes[i]] = i;

    std::vector<std::string> states(dim);
    std::vector<StateRole> roles(dim, StateRole::non_halting);
    for (std::size_t i = 0; i < tree; ++i) {
        states[i] = detail::prefix_name(prefixes[i]);
        states[halted(i)] = detail::prefix_name(prefixes[i]) + "#h";
        roles[halted(i)] =
            ln_member(prefixes[i], n) ? StateRole::accept : StateRole::reject;
    }
    states[live_ovf] = "ovf";
    states[halted(live_ovf)] = "ovf#h";
    roles[halted(live_ovf)] = StateRole::reject;

    auto letter = [&](int b) {
        const std::size_t unset = dim;
        std::vector<std::size_t> perm(dim, unset);
        std::vector<bool> used(dim, false);
        auto assign = [&](std::size_t from, std::size_t to) {
            perm[from] = to;
            used[to] = true;
        };
        for (std::size_t i = 0; i < tree; ++i)
            if (prefixes[i].size() <= n)
                assign(i, index[prefixes[i] + char('0' + b)]);
        assign(live_ovf, live_ovf);
        // Full-length prefixes leave the live tree into reject partners.
        std::vector<std::size_t> reject_halted;
        for (std::size_t i = 0; i < live_count; ++i)
            if (roles[halted(i)] == StateRole::reject)
                reject_halted.push_back(halted(i));
        std::size_t next_reject = 0;
        for (std::size_t i = 0; i < tree; ++i)
            if (prefixes[i].size() == n + 1)
                assign(i, reject_halted[next_reject++]);
        // Halted states fill the remaining slots; they carry no mass during
        // letter reading, any fixed completion keeps the map unitary.
        std::vector<std::size_t> free_slots;
        for (std::size_t t = 0; t < dim; ++t)
            if (!used[t]) free_slots.push_back(t);
        std::size_t next_free = 0;
        for (std::size_t i = 0; i < dim; ++i)
            if (perm[i] == unset) perm[i] = free_slots[next_free++];
        return make_superoperator(dim, {permutation_unitary(perm)});
    };

    std::vector<std::size_t> swap_perm(dim);
    for (std::size_t i = 0; i < live_count; ++i) {
        swap_perm[i] = halted(i);
        swap_perm[halted(i)] = i;
    }
    Superoperator u_lm = make_superoperator(dim, {ComplexMatrix::identity(dim)});
    Superoperator u_rm = make_superoperator(dim, {permutation_unitary(swap_perm)});

    return make_qfa(std::move(states), std::move(roles), index[""],
                    std::move(u_lm), letter(0), letter(1), std::move(u_rm));
}

// ---------------------------------------------------------------------------
// Running a QFA.

struct RunTraceEntry {
    std::string symbol;
    double p_accept_cum = 0.0;
    double p_reject_cum = 0.0;
    double entropy_nonhalt = 0.0;  // of the normalized non-halting block
};

struct RunResult {
    double p_accept = 0.0;
    double p_reject = 0.0;
    double p_continue = 0.0;
    ComplexMatrix final_state;  // unnormalized non-halting block
    std::vector<RunTraceEntry> per_symbol_trace;
};

namespace detail {

inline bool steps_all_unitary(const Superoperator& op) {
    for (const SuperoperatorStep& st : op.steps)
        if (!std::holds_alternative<ComplexMatrix>(st)) return false;
    return true;
}

inline ComplexMatrix submatrix(const ComplexMatrix& m,
                               const std::vector<std::size_t>& idx) {
    ComplexMatrix out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j)
            out(i, j) = m(idx[i], idx[j]);
    return out;
}

// Shared run machinery. A run that never measures inside a superoperator
// keeps the non-halting block pure, so it evolves a state vector; otherwise
// the full density block is evolved.
class QfaRunner {
  public:
    explicit QfaRunner(const QfaSpec& qfa) : qfa_(qfa) {
        pure_ = steps_all_unitary(qfa.u_lm) && steps_all_unitary(qfa.u0) &&
                steps_all_unitary(qfa.u1) && steps_all_unitary(qfa.u_rm);
        for (std::size_t i = 0; i < qfa.dim(); ++i) {
            if (qfa.roles[i] == StateRole::accept) acc_.push_back(i);
            else if (qfa.roles[i] == StateRole::reject) rej_.push_back(i);
            else non_.push_back(i);
        }
    }

    struct State {
        std::vector<cplx> v;  // pure path
        ComplexMatrix rho;    // dense path
        double p_acc = 0.0;
        double p_rej = 0.0;
    };

    bool pure() const { return pure_; }
    const std::vector<std::size_t>& non_indices() const { return non_; }

    State initial() const {
        State s;
        if (pure_) {
            s.v.assign(qfa_.dim(), cplx(0.0, 0.0));
            s.v[qfa_.start] = 1.0;
        } else {
            s.rho = ComplexMatrix(qfa_.dim());
            s.rho(qfa_.start, qfa_.start) = 1.0;
        }
        apply(s, qfa_.u_lm);
        split(s);
        return s;
    }

    void step_letter(State& s, int bit) const {
        apply(s, bit == 0 ? qfa_.u0 : qfa_.u1);
        split(s);
    }

    void finish(State& s) const {
        apply(s, qfa_.u_rm);
        split(s);
    }

    double continue_mass(const State& s) const {
        if (pure_) {
            double m = 0.0;
            for (const cplx& x : s.v) m += std::norm(x);
            return m;
        }
        return s.rho.trace().real();
    }

    double nonhalt_entropy(const State& s) const {
        if (pure_) return 0.0;
        double mass = continue_mass(s);
        if (mass <= 1e-15) return 0.0;
        EigenDecomposition eig = hermitian_eig(submatrix(s.rho, non_));
        for (double& v : eig.values) v /= mass;
        return entropy_bits(eig.values);
    }

    ComplexMatrix block_matrix(const State& s) const {
        if (pure_) return outer_product(s.v);
        return s.rho;
    }

  private:
    void apply(State& s, const Superoperator& op) const {
        if (pure_) {
            for (const SuperoperatorStep& st : op.steps)
                s.v = apply_to_vector(std::get<ComplexMatrix>(st), s.v);
        } else {
            s.rho = apply_steps(s.rho, op.steps);
        }
    }

    // Halting measurement: record accept/reject mass, keep P_non rho P_non.
    void split(State& s) const {
        if (pure_) {
            for (std::size_t i : acc_) {
                s.p_acc += std::norm(s.v[i]);
                s.v[i] = 0.0;
            }
            for (std::size_t i : rej_) {
                s.p_rej += std::norm(s.v[i]);
                s.v[i] = 0.0;
            }
        } else {
            for (std::size_t i : acc_) s.p_acc += s.rho(i, i).real();
            for (std::size_t i : rej_) s.p_rej += s.rho(i, i).real();
            for (std::size_t i = 0; i < qfa_.dim(); ++i) {
                const bool i_non = qfa_.roles[i] == StateRole::non_halting;
                for (std::size_t j = 0; j < qfa_.dim(); ++j) {
                    if (i_non && qfa_.roles[j] == StateRole::non_halting) continue;
                    s.rho(i, j) = 0.0;
                }
            }
        }
    }

    const QfaSpec& qfa_;
    bool pure_ = false;
    std::vector<std::size_t> acc_, rej_, non_;
};

}  // namespace detail

inline RunResult run_qfa(const QfaSpec& qfa, const std::string& word) {
    check_word(word);
    detail::QfaRunner runner(qfa);
    RunResult out;

    detail::QfaRunner::State s = runner.initial();
    out.per_symbol_trace.push_back(
        {"lm", s.p_acc, s.p_rej, runner.nonhalt_entropy(s)});
    for (char c : word) {
        runner.step_letter(s, c - '0');
        out.per_symbol_trace.push_back(
            {std::string(1, c), s.p_acc, s.p_rej, runner.nonhalt_entropy(s)});
    }
    runner.finish(s);
    out.per_symbol_trace.push_back(
        {"rm", s.p_acc, s.p_rej, runner.nonhalt_entropy(s)});

    out.p_accept = s.p_acc;
    out.p_reject = s.p_rej;
    out.p_continue = std::max(0.0, runner.continue_mass(s));
    out.final_state = runner.block_matrix(s);
    return out;
}

struct RecognizesResult {
    bool recognized = true;
    std::string counterexample;
};

// Checks every word of length <= n+2 in dictionary order; on failure reports
// the lexicographically first failing word.
inline RecognizesResult recognizes(const QfaSpec& qfa, std::size_t n, double p) {
    detail::QfaRunner runner(qfa);
    RecognizesResult res;
    std::string word;

    struct Walker {
        const detail::QfaRunner& runner;
        std::size_t n;
        double p;
        RecognizesResult& res;
        std::string& word;

        bool visit(const detail::QfaRunner::State& s, std::size_t depth) {
            detail::QfaRunner::State decided = s;
            runner.finish(decided);
            const bool member = ln_member(word, n);
            const double got = member ? decided.p_acc : decided.p_rej;
            if (got < p - 1e-9) {
                res.recognized = false;
                res.counterexample = word;
                return false;
            }
            if (depth == n + 2) return true;
            for (int b = 0; b < 2; ++b) {
                detail::QfaRunner::State child = s;
                runner.step_letter(child, b);
                word.push_back(char('0' + b));
                if (!visit(child, depth + 1)) return false;
                word.pop_back();
            }
            return true;
        }
    };

    Walker w{runner, n, p, res, word};
    w.visit(runner.initial(), 0);
    return res;
}

// True iff no halting mass (above 1e-9) appears after the left marker and the
// first min(r, |word|) letters, for every word of length <= n. Halting on the
// left marker itself always counts.
inline bool is_r_restricted(const QfaSpec& qfa, std::size_t r, std::size_t n) {
    detail::QfaRunner runner(qfa);
    const std::size_t depth_cap = std::min(r, n);

    struct Walker {
        const detail::QfaRunner& runner;
        std::size_t depth_cap;

        bool visit(const detail::QfaRunner::State& s, std::size_t depth) {
            if (s.p_acc + s.p_rej > 1e-9) return false;
            if (depth == depth_cap) return true;
            for (int b = 0; b < 2; ++b) {
                detail::QfaRunner::State child = s;
                runner.step_letter(child, b);
                if (!visit(child, depth + 1)) return false;
            }
            return true;
        }
    };

    Walker w{runner, depth_cap};
    return w.visit(runner.initial(), 0);
}

}  // namespace qfalab
