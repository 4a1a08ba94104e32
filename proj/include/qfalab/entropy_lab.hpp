#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "qfalab/automata.hpp"
#include "qfalab/ensemble.hpp"
#include "qfalab/joint.hpp"

namespace qfalab {

// ---------------------------------------------------------------------------
// Information-theoretic floors.

inline double fano_floor(double p) {
    if (p < -1e-12 || p > 1.0 + 1e-12)
        throw BadConfig("success probability " + std::to_string(p) +
                        " outside [0,1]");
    return 1.0 - binary_entropy(std::clamp(p, 0.0, 1.0));
}

inline double mutual_information(const JointDistribution& joint) {
    double i = joint.h_x() + joint.h_y() - joint.h_xy();
    if (i < 0.0 && i > -1e-9) i = 0.0;
    return i;
}

// ---------------------------------------------------------------------------
// Randomized sanity suite for the three entropy facts:
//   S(rho) <= log2(dim), S(U rho U*) = S(rho), S(sum_j P_j rho P_j) >= S(rho).

struct FactSuiteReport {
    std::size_t dim = 0;
    std::size_t trials = 0;
    double worst_bound_margin = 0.0;    // min over trials of log2(d) - S(rho)
    double worst_unitary_drift = 0.0;   // max |S(U rho U*) - S(rho)|
    double worst_measure_margin = 0.0;  // min of S(measured) - S(rho)
    bool holds = false;
};

// Haar-ish projective measurement: random orthonormal basis, columns dealt
// into `outcomes` groups round-robin.
inline ProjectiveMeasurement random_projective_measurement(std::size_t dim,
                                                           std::size_t outcomes,
                                                           std::uint64_t seed) {
    if (outcomes == 0 || outcomes > dim)
        throw BadConfig("measurement outcome count must be in [1, dim]");
    ComplexMatrix basis = random_unitary(dim, seed);
    std::vector<ComplexMatrix> projectors(outcomes, ComplexMatrix(dim));
    for (std::size_t j = 0; j < dim; ++j) {
        ComplexMatrix& p = projectors[j % outcomes];
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b)
                p(a, b) += basis(a, j) * std::conj(basis(b, j));
    }
    return make_projective_measurement(projectors);
}

inline BinaryObservable random_binary_observable(std::size_t dim,
                                                 std::uint64_t seed) {
    if (dim < 2) throw BadConfig("binary observable needs dim >= 2");
    ComplexMatrix basis = random_unitary(dim, mix_seed(seed, 1));
    Rng rng(mix_seed(seed, 2));
    std::size_t r = 1 + rng.index(dim - 1);  // rank of outcome 0
    ComplexMatrix p0(dim);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b)
                p0(a, b) += basis(a, j) * std::conj(basis(b, j));
    ComplexMatrix p1 = ComplexMatrix::identity(dim) - p0;
    return make_binary_observable({}, p0, p1);
}

inline FactSuiteReport fact_suite(std::size_t dim, std::size_t trials,
                                  std::uint64_t seed) {
    if (dim == 0 || dim > 16)
        throw TooLarge("fact suite dim " + std::to_string(dim) +
                       " outside [1, 16]");
    if (trials == 0) throw BadConfig("fact suite needs at least one trial");

    FactSuiteReport rep;
    rep.dim = dim;
    rep.trials = trials;
    rep.worst_bound_margin = std::numeric_limits<double>::infinity();
    rep.worst_unitary_drift = 0.0;
    rep.worst_measure_margin = std::numeric_limits<double>::infinity();

    const double log_dim = std::log2(double(dim));
    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t st = mix_seed(seed, t);
        DensityMatrix rho = random_density(dim, mix_seed(st, 1));
        const double s = von_neumann_entropy(rho);

        rep.worst_bound_margin = std::min(rep.worst_bound_margin, log_dim - s);

        ComplexMatrix u = random_unitary(dim, mix_seed(st, 2));
        DensityMatrix rotated = validate_density(conjugate_by(u, rho.matrix()));
        rep.worst_unitary_drift = std::max(rep.worst_unitary_drift,
                                           std::abs(von_neumann_entropy(rotated) - s));

        Rng rng(mix_seed(st, 3));
        std::size_t outcomes = dim == 1 ? 1 : 2 + rng.index(dim - 1);
        ProjectiveMeasurement meas =
            random_projective_measurement(dim, outcomes, mix_seed(st, 4));
        ComplexMatrix dephased(dim);
        for (const ComplexMatrix& p : meas.projectors)
            dephased = dephased + conjugate_by(p, rho.matrix());
        DensityMatrix measured = validate_density(dephased);
        rep.worst_measure_margin = std::min(
            rep.worst_measure_margin, von_neumann_entropy(measured) - s);
    }

    rep.holds = rep.worst_bound_margin >= -1e-9 &&
                rep.worst_unitary_drift <= 1e-9 &&
                rep.worst_measure_margin >= -1e-9;
    return rep;
}

// ---------------------------------------------------------------------------
// Mixing bound: if a two-outcome observable tells sigma0 from sigma1 with
// success p, then S of the even mixture exceeds the average S by 1 - H(p).

struct LemmaMixReport {
    double p = 0.0;    // discrimination success, relabeled so p >= 1/2
    double lhs = 0.0;  // S of the mixture
    double rhs = 0.0;  // average entropy + 1 - H(p)
    double margin = 0.0;
    bool holds = false;
};

inline LemmaMixReport lemma_mix_check(const DensityMatrix& sigma0,
                                      const DensityMatrix& sigma1,
                                      const BinaryObservable& obs) {
    LemmaMixReport rep;
    double raw = discrimination_success(sigma0, sigma1, obs);
    rep.p = std::max(raw, 1.0 - raw);

    DensityMatrix mix =
        validate_density((sigma0.matrix() + sigma1.matrix()) * 0.5);
    rep.lhs = von_neumann_entropy(mix);
    rep.rhs = 0.5 * (von_neumann_entropy(sigma0) + von_neumann_entropy(sigma1)) +
              1.0 - binary_entropy(rep.p);
    rep.margin = rep.lhs - rep.rhs;
    rep.holds = rep.margin >= -1e-9;
    return rep;
}

// ---------------------------------------------------------------------------
// Holevo quantity of an ensemble and the data bound I(X;Y) <= chi.

struct HolevoReport {
    double chi = 0.0;
    double mutual_information = 0.0;
    double margin = 0.0;
    bool holds = false;
};

inline HolevoReport holevo_chi(const Ensemble& ensemble,
                               const ProjectiveMeasurement& measurement) {
    if (measurement.dim() != ensemble.dim())
        throw DimensionMismatch("measurement dim " +
                                std::to_string(measurement.dim()) +
                                " vs ensemble dim " +
                                std::to_string(ensemble.dim()));
    HolevoReport rep;

    DensityMatrix avg = validate_density(average_state(ensemble));
    double chi = von_neumann_entropy(avg);
    for (std::size_t x = 0; x < ensemble.size(); ++x)
        chi -= ensemble.probs[x] * von_neumann_entropy(ensemble.states[x]);
    rep.chi = chi;

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
    JointDistribution joint =
        make_joint_distribution(ensemble.labels, labels_y, mass);
    rep.mutual_information = mutual_information(joint);
    rep.margin = rep.chi - rep.mutual_information;
    rep.holds = rep.margin >= -1e-9;
    return rep;
}

// ---------------------------------------------------------------------------
// Average-state entropy trajectory over uniformly random words.
//
// The tracked object at step k is the average over all 2^k length-k prefixes
// of the run state, with one refinement: each step's newly halted block is
// frozen at the moment it halts (its spectrum is pooled, never mixed with
// later mass). Freezing is a further orthogonal split of the average state,
// so the reported entropy never exceeds the entropy of the plain average,
// while every lower bound derived from distinguishability still applies.

struct TrajectoryPoint {
    std::size_t k = 0;
    double entropy = 0.0;
};

struct EntropyTrajectory {
    std::vector<TrajectoryPoint> points;
    double p_claimed = 0.0;  // recognition probability, when the caller asserts one
};

namespace detail {

class TrajectoryTracker {
  public:
    explicit TrajectoryTracker(const QfaSpec& qfa) : qfa_(qfa) {
        for (std::size_t i = 0; i < qfa.dim(); ++i) {
            if (qfa.roles[i] == StateRole::accept) acc_.push_back(i);
            else if (qfa.roles[i] == StateRole::reject) rej_.push_back(i);
            else non_.push_back(i);
        }
        active_ = ComplexMatrix(qfa.dim());
        active_(qfa.start, qfa.start) = 1.0;
        active_ = apply_steps(active_, qfa.u_lm.steps);
        freeze_halted();
    }

    void step_average() {
        ComplexMatrix next = (apply_steps(active_, qfa_.u0.steps) +
                              apply_steps(active_, qfa_.u1.steps)) * 0.5;
        active_ = std::move(next);
        freeze_halted();
    }

    double entropy() const {
        std::vector<double> spectrum = frozen_;
        EigenDecomposition eig = hermitian_eig(submatrix(active_, non_));
        spectrum.insert(spectrum.end(), eig.values.begin(), eig.values.end());
        return entropy_bits(spectrum);
    }

  private:
    void freeze_halted() {
        for (const std::vector<std::size_t>* block : {&acc_, &rej_}) {
            if (block->empty()) continue;
            ComplexMatrix sub = submatrix(active_, *block);
            if (sub.trace().real() > 1e-15) {
                EigenDecomposition eig = hermitian_eig(sub);
                frozen_.insert(frozen_.end(), eig.values.begin(),
                               eig.values.end());
            }
        }
        for (std::size_t i = 0; i < qfa_.dim(); ++i) {
            const bool i_non = qfa_.roles[i] == StateRole::non_halting;
            for (std::size_t j = 0; j < qfa_.dim(); ++j) {
                if (i_non && qfa_.roles[j] == StateRole::non_halting) continue;
                active_(i, j) = 0.0;
            }
        }
    }

    const QfaSpec& qfa_;
    std::vector<std::size_t> acc_, rej_, non_;
    ComplexMatrix active_;
    std::vector<double> frozen_;
};

}  // namespace detail

inline EntropyTrajectory average_state_trajectory(const QfaSpec& qfa,
                                                  std::size_t n) {
    detail::TrajectoryTracker tracker(qfa);
    EntropyTrajectory traj;
    traj.points.push_back({0, tracker.entropy()});
    for (std::size_t k = 1; k <= n; ++k) {
        tracker.step_average();
        traj.points.push_back({k, tracker.entropy()});
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Entropy growth check: a machine recognizing L_n with probability p must
// satisfy S_k >= (1 - H(p)) * k along the average-state trajectory.

struct GrowthReport {
    double floor = 0.0;  // 1 - H(p)
    EntropyTrajectory trajectory;
    std::vector<double> margins;  // S_k - floor * k
    double min_margin = 0.0;
    bool holds = false;
};

inline GrowthReport check_entropy_growth(const QfaSpec& qfa, double p,
                                         std::size_t n) {
    GrowthReport rep;
    rep.floor = fano_floor(p);
    rep.trajectory = average_state_trajectory(qfa, n);
    rep.trajectory.p_claimed = p;
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (const TrajectoryPoint& pt : rep.trajectory.points) {
        double margin = pt.entropy - rep.floor * double(pt.k);
        rep.margins.push_back(margin);
        rep.min_margin = std::min(rep.min_margin, margin);
    }
    rep.holds = rep.min_margin >= -1e-6;
    return rep;
}

}  // namespace qfalab
