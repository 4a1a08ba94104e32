#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qfalab/entropy_lab.hpp"
#include "qfalab/rac.hpp"

using namespace qfalab;

namespace {

// Qubit with Bloch components (bx, 0, bz).
DensityMatrix qubit_density(double bx, double bz) {
    ComplexMatrix m(2);
    m(0, 0) = 0.5 * (1.0 + bz);
    m(1, 1) = 0.5 * (1.0 - bz);
    m(0, 1) = 0.5 * bx;
    m(1, 0) = 0.5 * bx;
    return validate_density(m);
}

BinaryObservable z_observable() {
    ComplexMatrix p0(2), p1(2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    return make_binary_observable({}, p0, p1);
}

BinaryObservable x_observable() {
    ComplexMatrix p0(2), p1(2);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) {
            p0(r, c) = 0.5;
            p1(r, c) = (r == c) ? 0.5 : -0.5;
        }
    return make_binary_observable({}, p0, p1);
}

// Two bits in one qubit: encodings on the four diagonal Bloch directions,
// readouts along z for the first bit and x for the second. Every pair
// succeeds with probability (1 + 1/sqrt 2) / 2.
RandomAccessCode diagonal_code() {
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<DensityMatrix> encodings;
    for (std::size_t x = 0; x < 4; ++x) {
        const double bz = (x & 2) ? -s : s;  // first bit
        const double bx = (x & 1) ? -s : s;  // second bit
        encodings.push_back(qubit_density(bx, bz));
    }
    return make_rac(2, 1, RacMode::plain, std::move(encodings),
                    {{z_observable()}, {x_observable()}});
}

DensityMatrix basis_density2(std::size_t i) {
    ComplexMatrix m(2);
    m(i, i) = 1.0;
    return validate_density(m);
}

constexpr double kP21 = 0.8535533905932737;  // (1 + 1/sqrt 2) / 2
constexpr double kP31 = 0.7886751345948129;  // (1 + 1/sqrt 3) / 2

}  // namespace

TEST_CASE("rac construction validation") {
    std::vector<DensityMatrix> one = {basis_density2(0)};
    CHECK_THROWS_AS(make_rac(0, 1, RacMode::plain, one, {}), BadConfig);
    CHECK_THROWS_AS(make_rac(1, 0, RacMode::plain, one, {}), BadConfig);
    CHECK_THROWS_AS(make_rac(11, 1, RacMode::plain, one, {}), TooLarge);
    CHECK_THROWS_AS(make_rac(1, 7, RacMode::plain, one, {}), TooLarge);

    // Wrong encoding count.
    CHECK_THROWS_AS(
        make_rac(1, 1, RacMode::plain, one, {{z_observable()}}),
        DimensionMismatch);
    // Missing observable row.
    std::vector<DensityMatrix> two = {basis_density2(0), basis_density2(1)};
    CHECK_THROWS_AS(make_rac(1, 1, RacMode::plain, two, {}),
                    IncompleteObservableTable);
    // Serial codes need one observable per suffix.
    std::vector<DensityMatrix> four(4, basis_density2(0));
    CHECK_THROWS_AS(make_rac(2, 1, RacMode::serial, four,
                             {{z_observable()}, {x_observable()}}),
                    IncompleteObservableTable);
}

TEST_CASE("verification extremes") {
    std::vector<DensityMatrix> two = {basis_density2(0), basis_density2(1)};
    RandomAccessCode perfect =
        make_rac(1, 1, RacMode::plain, two, {{z_observable()}});
    RacVerification v = verify_rac(perfect);
    CHECK(v.p_min == Catch::Approx(1.0).margin(1e-12));
    CHECK(v.p_avg == Catch::Approx(1.0).margin(1e-12));

    // outcome0 = identity answers 0 regardless: right half the pairs.
    BinaryObservable blind = make_binary_observable(
        {}, ComplexMatrix::identity(2), ComplexMatrix(2));
    RandomAccessCode stuck = make_rac(1, 1, RacMode::plain, two, {{blind}});
    RacVerification s = verify_rac(stuck);
    CHECK(s.p_min == Catch::Approx(0.0).margin(1e-12));
    CHECK(s.p_avg == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("diagonal two-in-one code hits the optimum everywhere") {
    RandomAccessCode code = diagonal_code();
    RacVerification v = verify_rac(code);
    CHECK(v.p_min == Catch::Approx(kP21).margin(1e-12));
    CHECK(v.p_avg == Catch::Approx(kP21).margin(1e-12));
    for (std::size_t x = 0; x < 4; ++x)
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(v.per_pair[x][i] == Catch::Approx(kP21).margin(1e-12));
}

TEST_CASE("size bound report") {
    RacBoundReport ok = rac_bound_check(2, 1, kP21);
    CHECK(ok.required_m == Catch::Approx(0.7982479266142877).margin(1e-12));
    CHECK(ok.holds);

    RacBoundReport broken = rac_bound_check(2, 1, 0.99);
    CHECK(broken.required_m ==
          Catch::Approx(1.8384137282081776).margin(1e-12));
    CHECK_FALSE(broken.holds);

    CHECK(rac_bound_check(4, 2, 0.5).required_m ==
          Catch::Approx(0.0).margin(1e-12));
    CHECK(rac_bound_check(4, 2, 0.5).holds);

    RacBoundReport certain = rac_bound_check(3, 1, 1.0);
    CHECK(certain.required_m == Catch::Approx(3.0).margin(1e-12));
    CHECK_FALSE(certain.holds);

    CHECK_THROWS_AS(rac_bound_check(2, 1, 0.4), BadConfig);
    CHECK_THROWS_AS(rac_bound_check(2, 1, 1.1), BadConfig);
}

TEST_CASE("suffix mixtures keep the advertised residual entropy") {
    RandomAccessCode code = diagonal_code();

    // Full suffix pins the encoding: a pure state, zero bits left.
    SuffixEntropyReport full = suffix_mixture_entropy(code, "00");
    CHECK(full.entropy == Catch::Approx(0.0).margin(1e-9));
    CHECK(full.bound == Catch::Approx(0.0).margin(1e-12));
    CHECK(full.holds);

    // One known bit leaves the two z-opposed states: entropy H((1+1/sqrt2)/2).
    SuffixEntropyReport half = suffix_mixture_entropy(code, "0");
    CHECK(half.entropy == Catch::Approx(0.6008760366928562).margin(1e-9));
    CHECK(half.bound == Catch::Approx(0.39912396330714384).margin(1e-9));
    CHECK(half.holds);

    // No known bits: the four directions average to the fully mixed state.
    SuffixEntropyReport empty = suffix_mixture_entropy(code, "");
    CHECK(empty.entropy == Catch::Approx(1.0).margin(1e-9));
    CHECK(empty.bound == Catch::Approx(0.7982479266142877).margin(1e-9));
    CHECK(empty.holds);

    CHECK_THROWS_AS(suffix_mixture_entropy(code, "000"), BadConfig);

    // Explicit probability argument overrides the verified one.
    SuffixEntropyReport forced = suffix_mixture_entropy(code, "", 1.0);
    CHECK(forced.bound == Catch::Approx(2.0).margin(1e-12));
    CHECK_FALSE(forced.holds);
}

TEST_CASE("see-saw reaches the known optima") {
    RandomAccessCode c11 =
        seesaw_optimize(1, 1, RacObjective::worst_case, 7);
    CHECK(verify_rac(c11).p_min >= 1.0 - 1e-6);

    RandomAccessCode c21 =
        seesaw_optimize(2, 1, RacObjective::worst_case, 7);
    double p21 = verify_rac(c21).p_min;
    INFO("see-saw (2,1) worst-case success " << p21);
    CHECK(p21 == Catch::Approx(kP21).margin(1e-3));

    RandomAccessCode c31 =
        seesaw_optimize(3, 1, RacObjective::worst_case, 7);
    double p31 = verify_rac(c31).p_min;
    INFO("see-saw (3,1) worst-case success " << p31);
    CHECK(p31 == Catch::Approx(kP31).margin(1e-3));
}

TEST_CASE("see-saw output is deterministic per seed") {
    RandomAccessCode a = seesaw_optimize(2, 1, RacObjective::worst_case, 99);
    RandomAccessCode b = seesaw_optimize(2, 1, RacObjective::worst_case, 99);
    RacVerification va = verify_rac(a);
    RacVerification vb = verify_rac(b);
    REQUIRE(va.per_pair == vb.per_pair);
    for (std::size_t x = 0; x < 4; ++x)
        CHECK((a.encodings[x].matrix() - b.encodings[x].matrix()).max_abs() ==
              0.0);
}

TEST_CASE("average-objective iterates never lose ground") {
    detail::SeesawTrace trace;
    detail::seesaw_single(2, 1, RacObjective::average, 31, 60, 0.0, &trace);
    REQUIRE(trace.objective.size() >= 2);
    for (std::size_t i = 0; i + 1 < trace.objective.size(); ++i)
        REQUIRE(trace.objective[i + 1] >= trace.objective[i] - 1e-12);
}

TEST_CASE("optimized codes verify and satisfy the size bound") {
    struct Case {
        std::size_t n, m;
        RacObjective objective;
    };
    for (const Case& c : {Case{2, 1, RacObjective::worst_case},
                          Case{2, 1, RacObjective::average},
                          Case{3, 1, RacObjective::average},
                          Case{2, 2, RacObjective::worst_case}}) {
        RandomAccessCode code = seesaw_optimize(c.n, c.m, c.objective, 11);
        RacVerification v = verify_rac(code);
        REQUIRE(v.p_min >= 0.5 - 1e-9);
        REQUIRE(rac_bound_check(c.n, c.m, v.p_min).holds);
    }
    CHECK_THROWS_AS(seesaw_optimize(7, 1, RacObjective::average, 1), TooLarge);
    CHECK_THROWS_AS(seesaw_optimize(2, 4, RacObjective::average, 1), TooLarge);
}

TEST_CASE("serial refinement never hurts and can strictly help per class") {
    // Parity-like encodings: the first bit is invisible to any fixed
    // observable but becomes perfectly readable once the suffix is known.
    std::vector<DensityMatrix> xor_enc = {basis_density2(0), basis_density2(1),
                                          basis_density2(1), basis_density2(0)};
    RandomAccessCode plain = make_rac(2, 1, RacMode::plain, xor_enc,
                                      {{z_observable()}, {z_observable()}});
    RacVerification vp = verify_rac(plain);
    CHECK(vp.per_pair[1][0] == Catch::Approx(0.0).margin(1e-12));

    RandomAccessCode serial = serial_refine(plain);
    CHECK(serial.mode == RacMode::serial);
    CHECK(serial.observables[0].size() == 2);
    CHECK(serial.observables[1].size() == 1);
    RacVerification vs = verify_rac(serial);
    REQUIRE(vs.p_min >= vp.p_min - 1e-12);
    // With the suffix known, the first bit is read perfectly.
    for (std::size_t x = 0; x < 4; ++x)
        CHECK(vs.per_pair[x][0] == Catch::Approx(1.0).margin(1e-12));

    CHECK_THROWS_AS(serial_refine(serial), BadConfig);
}

TEST_CASE("serial refinement on random codes") {
    for (int t = 0; t < 20; ++t) {
        std::uint64_t base = mix_seed(606, t);
        std::vector<DensityMatrix> enc;
        for (std::size_t x = 0; x < 8; ++x)
            enc.push_back(random_density(2, mix_seed(base, x)));
        std::vector<std::vector<BinaryObservable>> obs;
        for (std::size_t i = 0; i < 3; ++i)
            obs.push_back({random_binary_observable(2, mix_seed(base, 100 + i))});
        RandomAccessCode plain =
            make_rac(3, 1, RacMode::plain, std::move(enc), std::move(obs));
        RandomAccessCode serial = serial_refine(plain);
        REQUIRE(verify_rac(serial).p_min >= verify_rac(plain).p_min - 1e-12);
    }
}
