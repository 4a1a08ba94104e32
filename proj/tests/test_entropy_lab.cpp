#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qfalab/decode.hpp"
#include "qfalab/entropy_lab.hpp"

using namespace qfalab;

namespace {

DensityMatrix basis_density(std::size_t dim, std::size_t i) {
    ComplexMatrix m(dim);
    m(i, i) = 1.0;
    return validate_density(m);
}

DensityMatrix plus_density() {
    ComplexMatrix m(2);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) m(r, c) = 0.5;
    return validate_density(m);
}

ComplexMatrix basis_projector(std::size_t dim, std::size_t i) {
    ComplexMatrix p(dim);
    p(i, i) = 1.0;
    return p;
}

BinaryObservable basis_observable() {
    return make_binary_observable({}, basis_projector(2, 0),
                                  basis_projector(2, 1));
}

constexpr double kHalfPlus = 0.8535533905932737;  // (1 + 1/sqrt 2) / 2

}  // namespace

TEST_CASE("fano floor") {
    CHECK(fano_floor(1.0) == 1.0);
    CHECK(fano_floor(0.5) == Catch::Approx(0.0).margin(1e-15));
    CHECK(fano_floor(0.0) == 1.0);
    CHECK(fano_floor(0.75) == Catch::Approx(1.0 - binary_entropy(0.75)));
    CHECK_THROWS_AS(fano_floor(1.2), BadConfig);
    CHECK_THROWS_AS(fano_floor(-0.1), BadConfig);
}

TEST_CASE("mutual information landmarks") {
    // Independent variables carry no information.
    JointDistribution prod = make_joint_distribution(
        {"x0", "x1"}, {"y0", "y1"},
        {0.3 * 0.6, 0.3 * 0.4, 0.7 * 0.6, 0.7 * 0.4});
    CHECK(mutual_information(prod) == Catch::Approx(0.0).margin(1e-12));

    JointDistribution copy = make_joint_distribution(
        {"x0", "x1"}, {"y0", "y1"}, {0.5, 0.0, 0.0, 0.5});
    CHECK(mutual_information(copy) == Catch::Approx(1.0).margin(1e-12));

    // Symmetric binary channel: information equals the fano floor.
    const double p = kHalfPlus;
    JointDistribution bsc = make_joint_distribution(
        {"x0", "x1"}, {"y0", "y1"},
        {p / 2, (1 - p) / 2, (1 - p) / 2, p / 2});
    CHECK(mutual_information(bsc) ==
          Catch::Approx(0.3991239633071438).margin(1e-12));
    CHECK(mutual_information(bsc) ==
          Catch::Approx(fano_floor(p)).margin(1e-12));
}

TEST_CASE("randomized fact suite holds across dimensions") {
    for (std::size_t dim : {1u, 2u, 3u, 8u, 16u}) {
        FactSuiteReport rep = fact_suite(dim, 40, 91000 + dim);
        INFO("dim " << dim << " bound " << rep.worst_bound_margin << " drift "
                    << rep.worst_unitary_drift << " measure "
                    << rep.worst_measure_margin);
        CHECK(rep.holds);
        CHECK(rep.dim == dim);
        CHECK(rep.trials == 40);
        CHECK(rep.worst_bound_margin >= -1e-9);
        CHECK(rep.worst_unitary_drift <= 1e-9);
        CHECK(rep.worst_measure_margin >= -1e-9);
    }
    CHECK_THROWS_AS(fact_suite(0, 10, 1), TooLarge);
    CHECK_THROWS_AS(fact_suite(17, 10, 1), TooLarge);
}

TEST_CASE("random binary observables are complete") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        BinaryObservable obs = random_binary_observable(4, seed);
        ComplexMatrix sum = obs.outcome0 + obs.outcome1;
        CHECK((sum - ComplexMatrix::identity(4)).max_abs() <= 1e-9);
    }
}

TEST_CASE("mixing bound: orthogonal states meet it with equality") {
    LemmaMixReport rep = lemma_mix_check(basis_density(2, 0), basis_density(2, 1),
                                         basis_observable());
    CHECK(rep.p == Catch::Approx(1.0).margin(1e-12));
    CHECK(rep.lhs == Catch::Approx(1.0).margin(1e-12));
    CHECK(rep.rhs == Catch::Approx(1.0).margin(1e-12));
    CHECK(rep.margin == Catch::Approx(0.0).margin(1e-9));
    CHECK(rep.holds);
}

TEST_CASE("mixing bound: identical pure states give zero on both sides") {
    LemmaMixReport rep = lemma_mix_check(basis_density(2, 0), basis_density(2, 0),
                                         basis_observable());
    CHECK(rep.p == Catch::Approx(0.5).margin(1e-12));
    CHECK(rep.lhs == Catch::Approx(0.0).margin(1e-9));
    CHECK(rep.rhs == Catch::Approx(0.0).margin(1e-9));
    CHECK(rep.holds);
}

TEST_CASE("mixing bound: frozen values for the two canonical qubit states") {
    HelstromResult best = helstrom_observable(basis_density(2, 0), plus_density());
    REQUIRE(best.success == Catch::Approx(kHalfPlus).margin(1e-12));
    LemmaMixReport rep =
        lemma_mix_check(basis_density(2, 0), plus_density(), best.observable);
    CHECK(rep.p == Catch::Approx(kHalfPlus).margin(1e-12));
    CHECK(rep.lhs == Catch::Approx(0.6008760366928562).margin(1e-12));
    CHECK(rep.rhs == Catch::Approx(0.3991239633071438).margin(1e-12));
    CHECK(rep.margin == Catch::Approx(0.2017520733857124).margin(1e-12));
    CHECK(rep.holds);
}

TEST_CASE("mixing bound: success is relabeled above one half") {
    BinaryObservable swapped = make_binary_observable(
        {}, basis_projector(2, 1), basis_projector(2, 0));
    LemmaMixReport rep = lemma_mix_check(basis_density(2, 0), basis_density(2, 1),
                                         swapped);
    CHECK(rep.p == Catch::Approx(1.0).margin(1e-12));
    CHECK(rep.holds);
}

TEST_CASE("mixing bound: randomized sweep with optimal and random observables") {
    for (std::size_t dim : {2u, 4u, 8u}) {
        for (int t = 0; t < 30; ++t) {
            std::uint64_t base = mix_seed(5200 + dim, t);
            DensityMatrix s0 = random_density(dim, mix_seed(base, 1));
            DensityMatrix s1 = random_density(dim, mix_seed(base, 2));
            LemmaMixReport opt =
                lemma_mix_check(s0, s1, helstrom_observable(s0, s1).observable);
            REQUIRE(opt.holds);
            LemmaMixReport rnd = lemma_mix_check(
                s0, s1, random_binary_observable(dim, mix_seed(base, 3)));
            REQUIRE(rnd.holds);
        }
    }
}

TEST_CASE("holevo: uniform orthogonal ensemble saturates the data bound") {
    const std::size_t d = 4;
    std::vector<std::string> labels = {"00", "01", "10", "11"};
    std::vector<double> probs(d, 0.25);
    std::vector<DensityMatrix> states;
    std::vector<ComplexMatrix> projectors;
    for (std::size_t i = 0; i < d; ++i) {
        states.push_back(basis_density(d, i));
        projectors.push_back(basis_projector(d, i));
    }
    HolevoReport rep =
        holevo_chi(make_ensemble(labels, probs, states),
                   make_projective_measurement(projectors));
    CHECK(rep.chi == Catch::Approx(2.0).margin(1e-9));
    CHECK(rep.mutual_information == Catch::Approx(2.0).margin(1e-9));
    CHECK(rep.margin == Catch::Approx(0.0).margin(1e-9));
    CHECK(rep.holds);
}

TEST_CASE("holevo: identical states carry nothing") {
    std::vector<DensityMatrix> states = {basis_density(2, 0), basis_density(2, 0)};
    HolevoReport rep = holevo_chi(
        make_ensemble({"0", "1"}, {0.5, 0.5}, states),
        make_projective_measurement(
            {basis_projector(2, 0), basis_projector(2, 1)}));
    CHECK(rep.chi == Catch::Approx(0.0).margin(1e-9));
    CHECK(rep.mutual_information == Catch::Approx(0.0).margin(1e-9));
    CHECK(rep.holds);
}

TEST_CASE("holevo: leading-ones ensemble saturates at 1.875 bits") {
    GeometricExample ex = geometric_example(4);
    HolevoReport rep = holevo_chi(ex.ensemble, ex.measurement);
    CHECK(rep.chi == Catch::Approx(1.875).margin(1e-9));
    CHECK(rep.mutual_information == Catch::Approx(1.875).margin(1e-9));
    CHECK(rep.holds);
}

TEST_CASE("holevo: randomized data-bound sweep") {
    for (int t = 0; t < 60; ++t) {
        std::uint64_t base = mix_seed(777, t);
        Rng rng(base);
        std::size_t labels = 2 + rng.index(5);
        std::size_t dim = 2 + rng.index(4);
        std::size_t outcomes = 2 + rng.index(dim - 1);
        Ensemble ens = random_ensemble(labels, dim, mix_seed(base, 1));
        ProjectiveMeasurement meas =
            random_projective_measurement(dim, outcomes, mix_seed(base, 2));
        HolevoReport rep = holevo_chi(ens, meas);
        INFO("trial " << t << " labels " << labels << " dim " << dim
                      << " outcomes " << outcomes << " margin " << rep.margin);
        REQUIRE(rep.holds);
        REQUIRE(rep.chi >= -1e-9);
    }
}

TEST_CASE("binary estimation obeys the fano floor") {
    // For an unbiased binary source, the information any binary observable
    // extracts is at least 1 - H(success) with success relabeled >= 1/2.
    for (int t = 0; t < 50; ++t) {
        std::uint64_t base = mix_seed(888, t);
        DensityMatrix s0 = random_density(2, mix_seed(base, 1));
        DensityMatrix s1 = random_density(2, mix_seed(base, 2));
        BinaryObservable obs = random_binary_observable(2, mix_seed(base, 3));
        double raw = discrimination_success(s0, s1, obs);
        double p = std::max(raw, 1.0 - raw);

        double q00 = measure_distribution(
                         s0, make_projective_measurement(
                                 {obs.outcome0, obs.outcome1}))
                         .probabilities[0];
        double q10 = measure_distribution(
                         s1, make_projective_measurement(
                                 {obs.outcome0, obs.outcome1}))
                         .probabilities[0];
        JointDistribution joint = make_joint_distribution(
            {"x0", "x1"}, {"y0", "y1"},
            {0.5 * q00, 0.5 * (1 - q00), 0.5 * q10, 0.5 * (1 - q10)});
        REQUIRE(mutual_information(joint) >= fano_floor(p) - 1e-9);
    }
}

TEST_CASE("average-state trajectory climbs one bit per letter") {
    QfaSpec qfa = prefix_qfa_for_ln(4);
    EntropyTrajectory traj = average_state_trajectory(qfa, 5);
    REQUIRE(traj.points.size() == 6);
    for (std::size_t k = 0; k < traj.points.size(); ++k) {
        CHECK(traj.points[k].k == k);
        CHECK(traj.points[k].entropy == Catch::Approx(double(k)).margin(1e-9));
    }
}

TEST_CASE("trivial machine has a flat trajectory") {
    Superoperator id1 = make_superoperator(1, {ComplexMatrix::identity(1)});
    QfaSpec qfa = make_qfa({"q0"}, {StateRole::non_halting}, 0, id1, id1, id1,
                           id1);
    EntropyTrajectory traj = average_state_trajectory(qfa, 5);
    for (const TrajectoryPoint& pt : traj.points)
        CHECK(pt.entropy == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("trajectory is nondecreasing for arbitrary machines") {
    auto check_monotone = [](const QfaSpec& qfa, std::size_t n) {
        EntropyTrajectory traj = average_state_trajectory(qfa, n);
        for (std::size_t k = 0; k + 1 < traj.points.size(); ++k) {
            INFO("k " << k << ": " << traj.points[k].entropy << " -> "
                      << traj.points[k + 1].entropy);
            REQUIRE(traj.points[k + 1].entropy >=
                    traj.points[k].entropy - 1e-9);
        }
    };

    check_monotone(lift_dfa(prefix_memory_dfa(2)), 5);
    check_monotone(prefix_qfa_for_ln(2), 4);

    std::vector<StateRole> roles = {StateRole::non_halting,
                                    StateRole::non_halting, StateRole::accept,
                                    StateRole::reject};
    std::vector<std::string> names = {"q0", "q1", "a", "r"};
    for (int t = 0; t < 10; ++t) {
        std::uint64_t base = mix_seed(4242, t);
        auto unitary_op = [&](int slot) {
            return make_superoperator(
                4, {random_unitary(4, mix_seed(base, slot))});
        };
        // Purely unitary transitions with halting after every symbol.
        check_monotone(make_qfa(names, roles, 0, unitary_op(0), unitary_op(1),
                                unitary_op(2), unitary_op(3)),
                       6);
        // A dephasing step inside one letter and a halting left marker.
        Superoperator noisy = make_superoperator(
            4, {random_unitary(4, mix_seed(base, 10)),
                random_projective_measurement(4, 2, mix_seed(base, 11))});
        check_monotone(make_qfa(names, roles, 0, unitary_op(12), noisy,
                                unitary_op(13), unitary_op(14)),
                       6);
    }
}

TEST_CASE("entropy growth report against a claimed recognition probability") {
    QfaSpec qfa = prefix_qfa_for_ln(4);

    GrowthReport exact = check_entropy_growth(qfa, 1.0, 5);
    CHECK(exact.floor == 1.0);
    CHECK(exact.holds);
    CHECK(exact.trajectory.p_claimed == 1.0);
    for (double m : exact.margins) CHECK(m == Catch::Approx(0.0).margin(1e-9));

    GrowthReport slack = check_entropy_growth(qfa, 0.75, 5);
    CHECK(slack.floor == Catch::Approx(fano_floor(0.75)));
    CHECK(slack.holds);
    CHECK(slack.min_margin >= -1e-9);
    CHECK(slack.margins.back() > 1.0);  // 5 (1 - floor) at the last point
}
