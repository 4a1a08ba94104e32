#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qfalab/density.hpp"

namespace qfalab {

struct PureComponent {
    double weight = 0.0;
    std::vector<cplx> amplitudes;
};

// Labeled ensemble {p_x, rho_x}. A pure-state decomposition, when given, must
// reconstruct its state within 1e-8 entrywise.
struct Ensemble {
    std::vector<std::string> labels;
    std::vector<double> probs;
    std::vector<DensityMatrix> states;
    std::vector<std::optional<std::vector<PureComponent>>> decompositions;

    std::size_t dim() const { return states.empty() ? 0 : states.front().dim(); }
    std::size_t size() const { return labels.size(); }
};

inline Ensemble make_ensemble(
    std::vector<std::string> labels, std::vector<double> probs,
    std::vector<DensityMatrix> states,
    std::vector<std::optional<std::vector<PureComponent>>> decompositions = {}) {
    if (labels.size() != probs.size() || labels.size() != states.size())
        throw DimensionMismatch("ensemble fields disagree: " +
                                std::to_string(labels.size()) + " labels, " +
                                std::to_string(probs.size()) + " probs, " +
                                std::to_string(states.size()) + " states");
    if (labels.empty()) throw BadConfig("ensemble must be nonempty");
    shannon_entropy(probs);  // validates the distribution contract
    const std::size_t d = states.front().dim();
    for (const DensityMatrix& s : states)
        if (s.dim() != d)
            throw DimensionMismatch("ensemble state dim " +
                                    std::to_string(s.dim()) + " vs " +
                                    std::to_string(d));
    if (decompositions.empty()) decompositions.resize(labels.size());
    if (decompositions.size() != labels.size())
        throw DimensionMismatch("decomposition count " +
                                std::to_string(decompositions.size()) + " vs " +
                                std::to_string(labels.size()));
    for (std::size_t i = 0; i < decompositions.size(); ++i) {
        if (!decompositions[i].has_value()) continue;
        ComplexMatrix rebuilt(d);
        for (const PureComponent& c : *decompositions[i]) {
            if (c.amplitudes.size() != d)
                throw DimensionMismatch("pure component length " +
                                        std::to_string(c.amplitudes.size()) +
                                        " vs dim " + std::to_string(d));
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t s = 0; s < d; ++s)
                    rebuilt(r, s) += c.weight * c.amplitudes[r] *
                                     std::conj(c.amplitudes[s]);
        }
        double defect = (rebuilt - states[i].matrix()).max_abs();
        if (defect > 1e-8)
            throw ReconstructionMismatch(
                "decomposition of label " + labels[i] +
                " misses the state by " + std::to_string(defect));
    }
    return Ensemble{std::move(labels), std::move(probs), std::move(states),
                    std::move(decompositions)};
}

// Ensemble average state sum_x p_x rho_x.
inline ComplexMatrix average_state(const Ensemble& e) {
    ComplexMatrix avg(e.dim());
    for (std::size_t i = 0; i < e.size(); ++i) {
        const ComplexMatrix& m = e.states[i].matrix();
        const double p = e.probs[i];
        for (std::size_t r = 0; r < avg.dim(); ++r)
            for (std::size_t c = 0; c < avg.dim(); ++c)
                avg(r, c) += p * m(r, c);
    }
    return avg;
}

// Seeded ensemble of random mixed states with a random full-support prior.
// Labels are fixed-width bit strings so lexicographic order is well defined.
inline Ensemble random_ensemble(std::size_t label_count, std::size_t dim,
                                std::uint64_t seed) {
    if (label_count == 0) throw BadConfig("ensemble needs at least one label");
    std::size_t width = 1;
    while ((std::size_t{1} << width) < label_count) ++width;

    Rng rng(mix_seed(seed, 0));
    std::vector<std::string> labels(label_count);
    std::vector<double> probs(label_count);
    double total = 0.0;
    for (std::size_t i = 0; i < label_count; ++i) {
        std::string s(width, '0');
        for (std::size_t b = 0; b < width; ++b)
            if (i & (std::size_t{1} << (width - 1 - b))) s[b] = '1';
        labels[i] = s;
        probs[i] = 0.05 + rng.uniform01();
        total += probs[i];
    }
    for (double& p : probs) p /= total;

    std::vector<DensityMatrix> states;
    states.reserve(label_count);
    for (std::size_t i = 0; i < label_count; ++i)
        states.push_back(random_density(dim, mix_seed(seed, 1 + i)));
    return make_ensemble(std::move(labels), std::move(probs),
                         std::move(states));
}

}  // namespace qfalab
