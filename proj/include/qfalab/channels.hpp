#pragma once

#include <string>
#include <variant>
#include <vector>

#include "qfalab/density.hpp"

namespace qfalab {

// Orthogonal projective measurement: Hermitian idempotent projectors, pairwise
// orthogonal and complete (summing to the identity).
struct ProjectiveMeasurement {
    std::vector<ComplexMatrix> projectors;

    std::size_t dim() const {
        return projectors.empty() ? 0 : projectors.front().dim();
    }
};

inline ProjectiveMeasurement make_projective_measurement(
    std::vector<ComplexMatrix> projectors) {
    if (projectors.empty())
        throw NotOrthogonalFamily("measurement needs at least one projector");
    const std::size_t d = projectors.front().dim();
    ComplexMatrix sum(d);
    for (std::size_t j = 0; j < projectors.size(); ++j) {
        const ComplexMatrix& p = projectors[j];
        if (p.dim() != d)
            throw DimensionMismatch("projector dims differ: " +
                                    std::to_string(p.dim()) + " vs " +
                                    std::to_string(d));
        double herm = p.hermiticity_defect();
        if (herm > 1e-9)
            throw NotOrthogonalFamily("projector " + std::to_string(j) +
                                      " not Hermitian, defect " +
                                      std::to_string(herm));
        double idem = (p * p - p).max_abs();
        if (idem > 1e-9)
            throw NotOrthogonalFamily("projector " + std::to_string(j) +
                                      " not idempotent, defect " +
                                      std::to_string(idem));
        for (std::size_t k = 0; k < j; ++k) {
            double cross = (projectors[k] * p).max_abs();
            if (cross > 1e-9)
                throw NotOrthogonalFamily(
                    "projectors " + std::to_string(k) + "," + std::to_string(j) +
                    " overlap, magnitude " + std::to_string(cross));
        }
        sum += p;
    }
    double complete = (sum - ComplexMatrix::identity(d)).max_abs();
    if (complete > 1e-9)
        throw NotOrthogonalFamily("projectors incomplete, defect " +
                                  std::to_string(complete));
    return ProjectiveMeasurement{std::move(projectors)};
}

// One step of a superoperator: a unitary or a non-selective orthogonal
// measurement.
using SuperoperatorStep = std::variant<ComplexMatrix, ProjectiveMeasurement>;

struct Superoperator {
    std::size_t dim = 0;
    std::vector<SuperoperatorStep> steps;
};

inline double unitarity_defect(const ComplexMatrix& u) {
    return (u.conj_transpose() * u - ComplexMatrix::identity(u.dim())).max_abs();
}

inline Superoperator make_superoperator(std::size_t dim,
                                        std::vector<SuperoperatorStep> steps) {
    for (const SuperoperatorStep& st : steps) {
        if (std::holds_alternative<ComplexMatrix>(st)) {
            const ComplexMatrix& u = std::get<ComplexMatrix>(st);
            if (u.dim() != dim)
                throw DimensionMismatch("unitary step dim " +
                                        std::to_string(u.dim()) + " vs " +
                                        std::to_string(dim));
            double defect = unitarity_defect(u);
            if (defect > 1e-9)
                throw NotOrthogonalFamily("step not unitary, defect " +
                                          std::to_string(defect));
        } else {
            const ProjectiveMeasurement& m = std::get<ProjectiveMeasurement>(st);
            if (m.dim() != dim)
                throw DimensionMismatch("measure step dim " +
                                        std::to_string(m.dim()) + " vs " +
                                        std::to_string(dim));
        }
    }
    return Superoperator{dim, std::move(steps)};
}

// Raw evolution, no validation of the result. States stay Hermitian because
// both step kinds conjugate by Hermitian-compatible maps.
inline ComplexMatrix apply_steps(const ComplexMatrix& state,
                                 const std::vector<SuperoperatorStep>& steps) {
    ComplexMatrix rho = state;
    for (const SuperoperatorStep& st : steps) {
        if (std::holds_alternative<ComplexMatrix>(st)) {
            rho = conjugate_by(std::get<ComplexMatrix>(st), rho);
        } else {
            const ProjectiveMeasurement& m = std::get<ProjectiveMeasurement>(st);
            ComplexMatrix next(rho.dim());
            for (const ComplexMatrix& p : m.projectors) next += conjugate_by(p, rho);
            rho = next;
        }
    }
    return rho;
}

inline DensityMatrix apply_superoperator(const DensityMatrix& rho,
                                         const Superoperator& op) {
    if (rho.dim() != op.dim)
        throw DimensionMismatch("state dim " + std::to_string(rho.dim()) +
                                " vs superoperator dim " +
                                std::to_string(op.dim));
    return validate_density(apply_steps(rho.matrix(), op.steps));
}

struct MeasurementOutcome {
    std::vector<double> probabilities;
    std::vector<ComplexMatrix> post_states;  // unnormalized P rho P
};

inline MeasurementOutcome measure_distribution(const DensityMatrix& rho,
                                               const ProjectiveMeasurement& m) {
    if (rho.dim() != m.dim())
        throw DimensionMismatch("state dim " + std::to_string(rho.dim()) +
                                " vs measurement dim " + std::to_string(m.dim()));
    MeasurementOutcome out;
    for (const ComplexMatrix& p : m.projectors) {
        out.probabilities.push_back(trace_product_re(p, rho.matrix()));
        out.post_states.push_back(conjugate_by(p, rho.matrix()));
    }
    return out;
}

// Two-outcome observable; the optional prepended steps run before the final
// projective readout (outcome0, outcome1).
struct BinaryObservable {
    std::vector<SuperoperatorStep> prepend;
    ComplexMatrix outcome0;
    ComplexMatrix outcome1;

    std::size_t dim() const { return outcome0.dim(); }
};

inline BinaryObservable make_binary_observable(
    std::vector<SuperoperatorStep> prepend, ComplexMatrix outcome0,
    ComplexMatrix outcome1) {
    make_projective_measurement({outcome0, outcome1});
    const std::size_t d = outcome0.dim();
    for (const SuperoperatorStep& st : prepend) {
        std::size_t sd = std::holds_alternative<ComplexMatrix>(st)
                             ? std::get<ComplexMatrix>(st).dim()
                             : std::get<ProjectiveMeasurement>(st).dim();
        if (sd != d)
            throw DimensionMismatch("prepend step dim " + std::to_string(sd) +
                                    " vs outcome dim " + std::to_string(d));
    }
    return BinaryObservable{std::move(prepend), std::move(outcome0),
                            std::move(outcome1)};
}

// Success probability of guessing an unbiased coin b from state sigma_b.
inline double discrimination_success(const DensityMatrix& sigma0,
                                     const DensityMatrix& sigma1,
                                     const BinaryObservable& obs) {
    if (sigma0.dim() != obs.dim() || sigma1.dim() != obs.dim())
        throw DimensionMismatch("state dims vs observable dim " +
                                std::to_string(obs.dim()));
    ComplexMatrix s0 = apply_steps(sigma0.matrix(), obs.prepend);
    ComplexMatrix s1 = apply_steps(sigma1.matrix(), obs.prepend);
    return 0.5 * trace_product_re(obs.outcome0, s0) +
           0.5 * trace_product_re(obs.outcome1, s1);
}

struct HelstromResult {
    BinaryObservable observable;
    double success = 0.0;
};

// Optimal unbiased binary discrimination: outcome0 projects onto the
// nonnegative eigenspace of sigma0 - sigma1 (ties go to outcome0);
// success = 1/2 + 1/4 * sum |eigenvalues|.
inline HelstromResult helstrom_observable_raw(const ComplexMatrix& sigma0,
                                              const ComplexMatrix& sigma1) {
    sigma0.check_same_dim(sigma1);
    const std::size_t d = sigma0.dim();
    EigenDecomposition eig = hermitian_eig(sigma0 - sigma1);

    ComplexMatrix p0(d);
    double abs_sum = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        abs_sum += std::abs(eig.values[j]);
        if (eig.values[j] < 0.0) continue;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < d; ++k)
                p0(i, k) += eig.vectors(i, j) * std::conj(eig.vectors(k, j));
    }
    ComplexMatrix p1 = ComplexMatrix::identity(d) - p0;

    HelstromResult out;
    out.success = 0.5 + 0.25 * abs_sum;
    out.observable = BinaryObservable{{}, std::move(p0), std::move(p1)};
    return out;
}

inline HelstromResult helstrom_observable(const DensityMatrix& sigma0,
                                          const DensityMatrix& sigma1) {
    return helstrom_observable_raw(sigma0.matrix(), sigma1.matrix());
}

}  // namespace qfalab
