#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qfalab/bitstrings.hpp"
#include "qfalab/channels.hpp"
#include "qfalab/rng.hpp"

namespace qfalab {

// ---------------------------------------------------------------------------
// Random access codes: n bits into m qubits, one binary readout per index.
// In serial mode the readout for index i may depend on the later bits
// x_{i+1..n}, so the table holds one observable per (index, suffix) pair.

enum class RacMode { plain, serial };
enum class RacObjective { worst_case, average };

struct RandomAccessCode {
    std::size_t n = 0;
    std::size_t m = 0;
    RacMode mode = RacMode::plain;
    // encodings[x] for x the integer value of the bit string x_1..x_n
    std::vector<DensityMatrix> encodings;
    // observables[i][s]: i is 0-based; plain codes have s = 0 only, serial
    // codes index s by the value of the suffix x_{i+2}..x_n
    std::vector<std::vector<BinaryObservable>> observables;

    std::size_t dim() const { return std::size_t{1} << m; }

    std::size_t bit_of(std::size_t x, std::size_t i) const {
        return (x >> (n - 1 - i)) & 1;
    }
    std::size_t suffix_of(std::size_t x, std::size_t i) const {
        const std::size_t len = n - 1 - i;
        return x & ((std::size_t{1} << len) - 1);
    }
    const BinaryObservable& observable_for(std::size_t x, std::size_t i) const {
        return observables[i][mode == RacMode::serial ? suffix_of(x, i) : 0];
    }
};

inline RandomAccessCode make_rac(std::size_t n, std::size_t m, RacMode mode,
                                 std::vector<DensityMatrix> encodings,
                                 std::vector<std::vector<BinaryObservable>>
                                     observables) {
    if (n == 0 || m == 0) throw BadConfig("rac needs n >= 1 and m >= 1");
    if (n > 10 || m > 6)
        throw TooLarge("rac size (n=" + std::to_string(n) +
                       ", m=" + std::to_string(m) + ") outside n <= 10, m <= 6");
    const std::size_t dim = std::size_t{1} << m;
    if (encodings.size() != (std::size_t{1} << n))
        throw DimensionMismatch("expected " +
                                std::to_string(std::size_t{1} << n) +
                                " encodings, got " +
                                std::to_string(encodings.size()));
    for (const DensityMatrix& rho : encodings)
        if (rho.dim() != dim)
            throw DimensionMismatch("encoding dim " + std::to_string(rho.dim()) +
                                    " vs code dim " + std::to_string(dim));
    if (observables.size() != n)
        throw IncompleteObservableTable("expected " + std::to_string(n) +
                                        " observable rows, got " +
                                        std::to_string(observables.size()));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t want =
            mode == RacMode::serial ? (std::size_t{1} << (n - 1 - i)) : 1;
        if (observables[i].size() != want)
            throw IncompleteObservableTable(
                "index " + std::to_string(i + 1) + " has " +
                std::to_string(observables[i].size()) + " observables, needs " +
                std::to_string(want));
        for (const BinaryObservable& obs : observables[i])
            if (obs.dim() != dim)
                throw DimensionMismatch("observable dim " +
                                        std::to_string(obs.dim()) +
                                        " vs code dim " + std::to_string(dim));
    }
    return RandomAccessCode{n, m, mode, std::move(encodings),
                            std::move(observables)};
}

// ---------------------------------------------------------------------------
// Exhaustive verification over all (x, i) pairs.

struct RacVerification {
    double p_min = 0.0;
    double p_avg = 0.0;
    std::vector<std::vector<double>> per_pair;  // [x][i]
};

namespace detail {

// Pr[readout of index i on rho_x gives x_i].
inline double pair_success(const RandomAccessCode& code, std::size_t x,
                           std::size_t i) {
    const BinaryObservable& obs = code.observable_for(x, i);
    ComplexMatrix rho = apply_steps(code.encodings[x].matrix(), obs.prepend);
    const ComplexMatrix& outcome =
        code.bit_of(x, i) == 0 ? obs.outcome0 : obs.outcome1;
    return trace_product_re(outcome, rho);
}

}  // namespace detail

inline RacVerification verify_rac(const RandomAccessCode& code) {
    const std::size_t count = std::size_t{1} << code.n;
    RacVerification v;
    v.p_min = 1.0;
    v.per_pair.assign(count, std::vector<double>(code.n, 0.0));
    double total = 0.0;
    for (std::size_t x = 0; x < count; ++x)
        for (std::size_t i = 0; i < code.n; ++i) {
            double p = detail::pair_success(code, x, i);
            v.per_pair[x][i] = p;
            v.p_min = std::min(v.p_min, p);
            total += p;
        }
    v.p_avg = total / double(count * code.n);
    return v;
}

// ---------------------------------------------------------------------------
// The information-theoretic size bound m >= (1 - H(p)) n.

struct RacBoundReport {
    bool holds = false;
    double required_m = 0.0;
};

inline RacBoundReport rac_bound_check(std::size_t n, std::size_t m, double p) {
    if (p < 0.5 - 1e-12 || p > 1.0 + 1e-12)
        throw BadConfig("rac bound needs p in [1/2, 1], got " +
                        std::to_string(p));
    RacBoundReport rep;
    rep.required_m = (1.0 - binary_entropy(std::clamp(p, 0.5, 1.0))) * double(n);
    rep.holds = double(m) >= rep.required_m - 1e-9;
    return rep;
}

// ---------------------------------------------------------------------------
// Suffix-mixture entropy: averaging the encodings over all prefixes z with a
// fixed suffix y of length k leaves at least (1 - H(p_min))(n - k) bits.

struct SuffixEntropyReport {
    double entropy = 0.0;
    double bound = 0.0;
    bool holds = false;
};

inline SuffixEntropyReport suffix_mixture_entropy(const RandomAccessCode& code,
                                                  const std::string& suffix,
                                                  double p_min) {
    const std::size_t k = suffix.size();
    if (k > code.n)
        throw BadConfig("suffix length " + std::to_string(k) + " exceeds n = " +
                        std::to_string(code.n));
    const std::size_t suffix_value = value_of(suffix);
    const std::size_t prefixes = std::size_t{1} << (code.n - k);

    ComplexMatrix mix(code.dim());
    for (std::size_t z = 0; z < prefixes; ++z) {
        const std::size_t x = (z << k) | suffix_value;
        mix = mix + code.encodings[x].matrix();
    }
    mix = mix * (1.0 / double(prefixes));

    SuffixEntropyReport rep;
    rep.entropy = von_neumann_entropy(validate_density(mix));
    rep.bound = (1.0 - binary_entropy(std::clamp(p_min, 0.0, 1.0))) *
                double(code.n - k);
    rep.holds = rep.entropy >= rep.bound - 1e-6;
    return rep;
}

inline SuffixEntropyReport suffix_mixture_entropy(const RandomAccessCode& code,
                                                  const std::string& suffix) {
    return suffix_mixture_entropy(code, suffix, verify_rac(code).p_min);
}

// ---------------------------------------------------------------------------
// See-saw search. Alternates two closed-form steps:
//   measurement: per index, the Helstrom observable for the weight-averaged
//     encodings with that bit 0 vs 1 (exact maximizer of the index's weighted
//     success);
//   encoding: per string, the top eigenvector of the weighted sum of signed
//     observable operators (exact maximizer of that string's weighted score).
// For the average objective the weights stay uniform and both steps are exact
// argmaxes of p_avg, so the iterate sequence is nondecreasing. The worst-case
// objective boosts below-average pairs with multiplicative weights; its value
// sequence is not monotone, so the best iterate is kept and the loop stops
// only after a long stretch without improvement.

namespace detail {

struct SeesawTrace {
    std::vector<double> objective;  // value after each full iteration
};

inline RandomAccessCode seesaw_single(std::size_t n, std::size_t m,
                                      RacObjective objective,
                                      std::uint64_t seed,
                                      std::size_t max_iters, double tol,
                                      SeesawTrace* trace) {
    const std::size_t count = std::size_t{1} << n;
    const std::size_t dim = std::size_t{1} << m;

    std::vector<DensityMatrix> encodings;
    encodings.reserve(count);
    for (std::size_t x = 0; x < count; ++x)
        encodings.push_back(validate_density(
            outer_product(random_pure_state(dim, mix_seed(seed, 1000 + x)))));

    auto bit_of = [n](std::size_t x, std::size_t i) {
        return (x >> (n - 1 - i)) & 1;
    };

    std::vector<std::vector<double>> weights(
        count, std::vector<double>(n, 1.0 / double(count * n)));

    RandomAccessCode best;
    double best_value = -1.0;
    double prev_value = -1.0;
    std::size_t since_improve = 0;
    constexpr std::size_t stall_window = 50;

    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        // Measurement step. Uniform weights reduce to the plain average split.
        std::vector<std::vector<BinaryObservable>> observables;
        observables.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            ComplexMatrix avg0(dim), avg1(dim);
            for (std::size_t x = 0; x < count; ++x) {
                ComplexMatrix& side = bit_of(x, i) == 0 ? avg0 : avg1;
                side = side + encodings[x].matrix() * weights[x][i];
            }
            observables.push_back({helstrom_observable_raw(avg0, avg1).observable});
        }

        // Encoding step: maximize sum_i w_{x,i} Tr((P_{i,x_i} - P_{i,1-x_i}) rho).
        std::vector<DensityMatrix> next;
        next.reserve(count);
        for (std::size_t x = 0; x < count; ++x) {
            ComplexMatrix score(dim);
            for (std::size_t i = 0; i < n; ++i) {
                const BinaryObservable& obs = observables[i][0];
                const double w =
                    objective == RacObjective::average ? 1.0 : weights[x][i];
                ComplexMatrix signed_op =
                    bit_of(x, i) == 0 ? obs.outcome0 - obs.outcome1
                                      : obs.outcome1 - obs.outcome0;
                score = score + signed_op * w;
            }
            EigenDecomposition eig = hermitian_eig(score);
            std::vector<cplx> top(dim);
            for (std::size_t a = 0; a < dim; ++a) top[a] = eig.vectors(a, 0);
            next.push_back(validate_density(outer_product(top)));
        }
        encodings = std::move(next);

        RandomAccessCode code =
            make_rac(n, m, RacMode::plain, encodings, observables);
        RacVerification v = verify_rac(code);
        const double value =
            objective == RacObjective::average ? v.p_avg : v.p_min;
        if (trace) trace->objective.push_back(value);
        if (value > best_value) {
            best_value = value;
            best = std::move(code);
            since_improve = 0;
        } else {
            ++since_improve;
        }
        if (objective == RacObjective::worst_case) {
            double total = 0.0;
            for (std::size_t x = 0; x < count; ++x)
                for (std::size_t i = 0; i < n; ++i) {
                    weights[x][i] *=
                        std::exp(2.0 * (v.p_avg - v.per_pair[x][i]));
                    total += weights[x][i];
                }
            for (auto& row : weights)
                for (double& w : row) w /= total;
            if (tol > 0.0 && since_improve >= stall_window) break;
        } else {
            if (prev_value >= 0.0 && value - prev_value < tol) break;
        }
        prev_value = value;
    }
    return best;
}

}  // namespace detail

inline RandomAccessCode seesaw_optimize(std::size_t n, std::size_t m,
                                        RacObjective objective,
                                        std::uint64_t seed,
                                        std::size_t max_iters = 500,
                                        double tol = 1e-7) {
    if (n == 0 || n > 6 || m == 0 || m > 3)
        throw TooLarge("see-saw supports 1 <= n <= 6, 1 <= m <= 3");
    constexpr std::size_t restarts = 8;

    RandomAccessCode best;
    double best_value = -1.0;
    for (std::size_t r = 0; r < restarts; ++r) {
        RandomAccessCode code = detail::seesaw_single(
            n, m, objective, mix_seed(seed, r), max_iters, tol, nullptr);
        RacVerification v = verify_rac(code);
        const double value =
            objective == RacObjective::average ? v.p_avg : v.p_min;
        if (value > best_value) {
            best_value = value;
            best = std::move(code);
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Serial upgrade of a plain code: per (index, suffix) class, keep the better
// of the plain observable and the class Helstrom observable, judged by the
// class-minimum success (then class average). The chosen observable never
// does worse on its class than the plain one, so p_min cannot drop.

inline RandomAccessCode serial_refine(const RandomAccessCode& code) {
    if (code.mode != RacMode::plain)
        throw BadConfig("serial_refine expects a plain code");
    const std::size_t n = code.n;
    const std::size_t dim = code.dim();

    auto class_score = [&](std::size_t i, std::size_t suffix,
                           const BinaryObservable& obs) {
        double worst = 1.0, total = 0.0;
        std::size_t members = 0;
        const std::size_t suffix_len = n - 1 - i;
        for (std::size_t head = 0; head < (std::size_t{2} << i); ++head) {
            const std::size_t x = (head << suffix_len) | suffix;
            ComplexMatrix rho =
                apply_steps(code.encodings[x].matrix(), obs.prepend);
            const ComplexMatrix& outcome =
                code.bit_of(x, i) == 0 ? obs.outcome0 : obs.outcome1;
            const double p = trace_product_re(outcome, rho);
            worst = std::min(worst, p);
            total += p;
            ++members;
        }
        return std::pair<double, double>(worst, total / double(members));
    };

    std::vector<std::vector<BinaryObservable>> table(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t suffix_len = n - 1 - i;
        for (std::size_t s = 0; s < (std::size_t{1} << suffix_len); ++s) {
            ComplexMatrix avg0(dim), avg1(dim);
            for (std::size_t head = 0; head < (std::size_t{1} << i); ++head) {
                const std::size_t z0 = (head << (suffix_len + 1)) | s;
                const std::size_t z1 =
                    (head << (suffix_len + 1)) | (std::size_t{1} << suffix_len) | s;
                avg0 = avg0 + code.encodings[z0].matrix();
                avg1 = avg1 + code.encodings[z1].matrix();
            }
            const double norm = 1.0 / double(std::size_t{1} << i);
            avg0 = avg0 * norm;
            avg1 = avg1 * norm;
            BinaryObservable candidate =
                helstrom_observable_raw(avg0, avg1).observable;
            const auto cand_score = class_score(i, s, candidate);
            const auto plain_score = class_score(i, s, code.observables[i][0]);
            table[i].push_back(cand_score > plain_score ? candidate
                                                        : code.observables[i][0]);
        }
    }
    return make_rac(n, code.m, RacMode::serial, code.encodings,
                    std::move(table));
}

}  // namespace qfalab
