#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qfalab/bitstrings.hpp"
#include "qfalab/channels.hpp"
#include "qfalab/ensemble.hpp"
#include "qfalab/joint.hpp"

namespace qfalab {

// ---------------------------------------------------------------------------
// Joint law of (encoded label, measurement outcome).

inline JointDistribution build_joint(const Ensemble& ensemble,
                                     const ProjectiveMeasurement& measurement) {
    if (measurement.dim() != ensemble.dim())
        throw DimensionMismatch("measurement dim " +
                                std::to_string(measurement.dim()) +
                                " vs ensemble dim " +
                                std::to_string(ensemble.dim()));
    const std::size_t ny = measurement.projectors.size();
    std::vector<std::string> labels_y(ny);
    for (std::size_t j = 0; j < ny; ++j) labels_y[j] = "y" + std::to_string(j);

    std::vector<double> mass(ensemble.size() * ny, 0.0);
    for (std::size_t x = 0; x < ensemble.size(); ++x) {
        MeasurementOutcome out =
            measure_distribution(ensemble.states[x], measurement);
        for (std::size_t j = 0; j < ny; ++j)
            mass[x * ny + j] = ensemble.probs[x] * out.probabilities[j];
    }
    return make_joint_distribution(ensemble.labels, labels_y, std::move(mass));
}

// ---------------------------------------------------------------------------
// Deterministic table decoders and the MAP decoder.

struct DecoderTable {
    std::vector<std::size_t> x_for_y;  // index into labels_x per outcome
};

inline DecoderTable map_decoder(const JointDistribution& joint) {
    const std::size_t nx = joint.labels_x.size();
    const std::size_t ny = joint.labels_y.size();
    std::size_t lex_smallest = 0;
    for (std::size_t x = 1; x < nx; ++x)
        if (joint.labels_x[x] < joint.labels_x[lex_smallest]) lex_smallest = x;

    DecoderTable table;
    table.x_for_y.assign(ny, lex_smallest);
    for (std::size_t y = 0; y < ny; ++y) {
        double best = 0.0;
        std::size_t pick = lex_smallest;
        bool any = false;
        for (std::size_t x = 0; x < nx; ++x) {
            const double m = joint.at(x, y);
            if (m <= 0.0) continue;
            if (!any || m > best ||
                (m == best && joint.labels_x[x] < joint.labels_x[pick])) {
                best = m;
                pick = x;
                any = true;
            }
        }
        if (any) table.x_for_y[y] = pick;
    }
    return table;
}

inline double decoder_success(const JointDistribution& joint,
                              const DecoderTable& table) {
    if (table.x_for_y.size() != joint.labels_y.size())
        throw DimensionMismatch("decoder table covers " +
                                std::to_string(table.x_for_y.size()) +
                                " outcomes, joint has " +
                                std::to_string(joint.labels_y.size()));
    double s = 0.0;
    for (std::size_t y = 0; y < joint.labels_y.size(); ++y)
        s += joint.at(table.x_for_y[y], y);
    return s;
}

// ---------------------------------------------------------------------------
// Net probability of the d most likely values.

inline double top_mass(std::vector<double> dist, std::size_t d) {
    std::sort(dist.begin(), dist.end(), std::greater<double>());
    double s = 0.0;
    for (std::size_t i = 0; i < std::min(d, dist.size()); ++i) s += dist[i];
    return s;
}

// ---------------------------------------------------------------------------
// The decoding sandwich: MAP success is at least 2^{-H(X|Y)}, and no decoder
// on an m-qubit encoding beats the mass of the 2^m most likely inputs.

struct DecodeReport {
    double success = 0.0;
    double map_lower = 0.0;
    double cap_upper = 0.0;
    bool both_hold = false;
};

inline DecodeReport decode_report(const JointDistribution& joint,
                                  const DecoderTable& table, std::size_t m,
                                  bool is_map) {
    DecodeReport rep;
    rep.success = decoder_success(joint, table);
    rep.map_lower = std::exp2(-joint.h_x_given_y());
    rep.cap_upper = top_mass(joint.marginal_x(), std::size_t{1} << m);
    const bool lower_ok = !is_map || rep.success >= rep.map_lower - 1e-9;
    rep.both_hold = lower_ok && rep.success <= rep.cap_upper + 1e-9;
    return rep;
}

// ---------------------------------------------------------------------------
// Projection-sum claim: for codewords confined to a 2^m-dimensional subspace
// and any mutually orthogonal projector family, sum_x ||P_x phi_x||^2 <= 2^m.

struct ProjectionSumReport {
    double sum = 0.0;
    bool holds = false;
};

inline ProjectionSumReport projection_sum_check(
    const std::vector<std::vector<cplx>>& codewords,
    const std::vector<ComplexMatrix>& projectors, std::size_t m) {
    if (codewords.empty() || codewords.size() != projectors.size())
        throw DimensionMismatch("need one projector per codeword");
    const std::size_t dim = projectors[0].dim();
    for (const std::vector<cplx>& phi : codewords) {
        if (phi.size() != dim)
            throw DimensionMismatch("codeword length vs projector dim");
        double norm = 0.0;
        for (const cplx& a : phi) norm += std::norm(a);
        if (std::abs(norm - 1.0) > 1e-9)
            throw BadConfig("codeword is not a unit vector");
    }
    for (std::size_t a = 0; a < projectors.size(); ++a) {
        const ComplexMatrix& p = projectors[a];
        if (p.dim() != dim)
            throw DimensionMismatch("projector dims disagree");
        if (p.hermiticity_defect() > 1e-9 || (p * p - p).max_abs() > 1e-9)
            throw NotOrthogonalFamily("entry " + std::to_string(a) +
                                      " is not an orthogonal projector");
        for (std::size_t b = a + 1; b < projectors.size(); ++b)
            if ((p * projectors[b]).max_abs() > 1e-9)
                throw NotOrthogonalFamily("projectors " + std::to_string(a) +
                                          " and " + std::to_string(b) +
                                          " overlap");
    }
    // The claim presumes the codewords span at most 2^m dimensions; verify
    // via the rank of their Gram matrix.
    {
        ComplexMatrix gram(codewords.size());
        for (std::size_t a = 0; a < codewords.size(); ++a)
            for (std::size_t b = 0; b < codewords.size(); ++b) {
                cplx inner(0.0, 0.0);
                for (std::size_t k = 0; k < dim; ++k)
                    inner += std::conj(codewords[a][k]) * codewords[b][k];
                gram(a, b) = inner;
            }
        std::size_t rank = 0;
        for (double v : hermitian_eig(gram).values)
            if (v > 1e-9) ++rank;
        if (rank > (std::size_t{1} << m))
            throw BadConfig("codewords span " + std::to_string(rank) +
                            " dimensions, more than 2^m = " +
                            std::to_string(std::size_t{1} << m));
    }

    ProjectionSumReport rep;
    for (std::size_t x = 0; x < codewords.size(); ++x) {
        std::vector<cplx> projected =
            apply_to_vector(projectors[x], codewords[x]);
        for (const cplx& a : projected) rep.sum += std::norm(a);
    }
    rep.holds = rep.sum <= double(std::size_t{1} << m) + 1e-9;
    return rep;
}

// ---------------------------------------------------------------------------
// Geometric example: uniform n-bit strings, encoded by the position of the
// first 0 (all-ones maps to the last state). Half the strings land on state
// 0, a quarter on state 1, and so on.

struct GeometricSummary {
    std::size_t n = 0;
    std::size_t m = 0;
    double success = 0.0;
    double mutual_information = 0.0;
    double chi = 0.0;
    double h_x_given_y = 0.0;
    double map_lower = 0.0;
    double cap_upper = 0.0;
    bool both_hold = false;
};

struct GeometricExample {
    Ensemble ensemble;
    ProjectiveMeasurement measurement;
    GeometricSummary summary;
};

inline std::size_t leading_ones(const std::string& x) {
    std::size_t i = 0;
    while (i < x.size() && x[i] == '1') ++i;
    return i;
}

inline GeometricExample geometric_example(std::size_t n) {
    if (n == 0 || n > 12)
        throw BadConfig("geometric example needs 1 <= n <= 12");
    std::size_t m = 0;
    while ((std::size_t{1} << m) < n + 1) ++m;
    const std::size_t dim = std::size_t{1} << m;
    const std::size_t count = std::size_t{1} << n;

    std::vector<std::string> labels(count);
    std::vector<double> probs(count, 1.0 / double(count));
    std::vector<DensityMatrix> states;
    states.reserve(count);
    for (std::size_t v = 0; v < count; ++v) {
        labels[v] = bits_of(v, n);
        ComplexMatrix pure(dim);
        const std::size_t slot = leading_ones(labels[v]);
        pure(slot, slot) = 1.0;
        states.push_back(validate_density(pure));
    }
    Ensemble ensemble = make_ensemble(labels, probs, states);

    std::vector<ComplexMatrix> projectors;
    for (std::size_t j = 0; j <= n; ++j) {
        ComplexMatrix p(dim);
        p(j, j) = 1.0;
        projectors.push_back(p);
    }
    if (n + 1 < dim) {
        ComplexMatrix rest = ComplexMatrix::identity(dim);
        for (const ComplexMatrix& p : projectors) rest = rest - p;
        projectors.push_back(rest);
    }
    ProjectiveMeasurement measurement =
        make_projective_measurement(projectors);

    JointDistribution joint = build_joint(ensemble, measurement);
    DecoderTable table = map_decoder(joint);
    DecodeReport dec = decode_report(joint, table, m, true);

    GeometricSummary s;
    s.n = n;
    s.m = m;
    s.success = dec.success;
    s.h_x_given_y = joint.h_x_given_y();
    s.mutual_information = joint.h_x() + joint.h_y() - joint.h_xy();
    DensityMatrix avg = validate_density(average_state(ensemble));
    s.chi = von_neumann_entropy(avg);
    for (std::size_t x = 0; x < ensemble.size(); ++x)
        s.chi -= ensemble.probs[x] * von_neumann_entropy(ensemble.states[x]);
    s.map_lower = dec.map_lower;
    s.cap_upper = dec.cap_upper;
    s.both_hold = dec.both_hold;
    return GeometricExample{std::move(ensemble), std::move(measurement), s};
}

// Canonical code saturating the top-mass cap: the 2^m most likely labels get
// distinct basis states, everything else piles onto state 0.
inline std::pair<Ensemble, ProjectiveMeasurement> saturating_code(
    std::vector<std::string> labels, std::vector<double> probs, std::size_t m) {
    if (labels.size() != probs.size() || labels.empty())
        throw DimensionMismatch("labels and probabilities disagree");
    const std::size_t dim = std::size_t{1} << m;
    std::vector<std::size_t> order(labels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (probs[a] != probs[b]) return probs[a] > probs[b];
        return labels[a] < labels[b];
    });
    std::vector<std::size_t> slot(labels.size(), 0);
    for (std::size_t r = 0; r < order.size() && r < dim; ++r)
        slot[order[r]] = r;

    std::vector<DensityMatrix> states;
    states.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        ComplexMatrix pure(dim);
        pure(slot[i], slot[i]) = 1.0;
        states.push_back(validate_density(pure));
    }
    std::vector<ComplexMatrix> projectors;
    for (std::size_t j = 0; j < dim; ++j) {
        ComplexMatrix p(dim);
        p(j, j) = 1.0;
        projectors.push_back(p);
    }
    return {make_ensemble(std::move(labels), std::move(probs), std::move(states)),
            make_projective_measurement(projectors)};
}

}  // namespace qfalab
