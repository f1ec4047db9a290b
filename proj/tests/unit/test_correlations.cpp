#include <cmath>
#include <random>

#include "emitcorr/correlations.hpp"
#include "emitcorr/oracles.hpp"
#include "helpers.hpp"

using namespace emitcorr;
using testing::bell_plus;
using testing::max_abs;
using testing::pi;

namespace {

const double h08 = 0.7219280948873623;  // h(0.8)

DensityMatrix product_state() {
    Matrix2c a;
    a << 0.7, cplx(0.2, 0.1), cplx(0.2, -0.1), 0.3;
    Matrix2c b;
    b << 0.4, cplx(0.0, 0.3), cplx(0.0, -0.3), 0.6;
    return tensor_product(ReducedState(a, Subsystem::A), ReducedState(b, Subsystem::B));
}

Matrix4c swap_qubits(const Matrix4c& m) {
    Eigen::PermutationMatrix<4> p;
    p.indices() << 0, 2, 1, 3;
    return p * m * p.transpose();
}

Matrix4c random_x_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double a = u(rng), b = u(rng) * (1.0 - a);
    double c = u(rng) * std::sqrt(a * b);
    double phase = 2 * pi * u(rng);
    Matrix4c x = Matrix4c::Zero();
    x(0, 0) = 1.0 - a - b;
    x(1, 1) = a;
    x(2, 2) = b;
    x(1, 2) = std::polar(c, phase);
    x(2, 1) = std::conj(x(1, 2));
    return x;
}

} // namespace

TEST_CASE("measurement basis is orthonormal and complete") {
    for (double th : {0.0, 0.3, pi / 4, 1.2, 2.5})
        for (double ph : {0.0, 1.0, 4.0}) {
            MeasurementBasis m{th, ph};
            CHECK(std::abs(m.a().dot(m.b())) < 1e-12);
            Matrix2c sum = m.a() * m.a().adjoint() + m.b() * m.b().adjoint();
            CHECK((sum - Matrix2c::Identity()).cwiseAbs().maxCoeff() < 1e-12);

            MeasurementBasis c = m.canonical();
            CHECK(c.theta_m >= 0.0);
            CHECK(c.theta_m <= pi / 2 + 1e-15);
            CHECK(c.phi_m >= 0.0);
            CHECK(c.phi_m < 2 * pi);
            Matrix2c pa = m.a() * m.a().adjoint(), pb = m.b() * m.b().adjoint();
            Matrix2c qa = c.a() * c.a().adjoint(), qb = c.b() * c.b().adjoint();
            double same = std::max((pa - qa).cwiseAbs().maxCoeff(), (pb - qb).cwiseAbs().maxCoeff());
            double swapped = std::max((pa - qb).cwiseAbs().maxCoeff(), (pb - qa).cwiseAbs().maxCoeff());
            CHECK(std::min(same, swapped) < 1e-12);
        }
}

TEST_CASE("mutual information examples") {
    CHECK(mutual_information(DensityMatrix(bell_plus())) == doctest::Approx(2.0));
    CHECK(std::abs(mutual_information(product_state())) < 1e-12);
    CHECK(mutual_information(build_bell_diagonal(0.8, 0.8, -0.6)) == doctest::Approx(1.078).epsilon(1e-3));
}

TEST_CASE("post-measurement states") {
    DensityMatrix bell(bell_plus());
    ConditionalState c = post_measurement_state(bell, MeasurementBasis{0.0, 0.0}, Outcome::a);
    CHECK(c.probability == doctest::Approx(0.5));
    CHECK(c.state.label() == Subsystem::A);
    CHECK(std::abs(c.state.matrix()(1, 1) - 1.0) < 1e-15);

    DensityMatrix prod = product_state();
    Matrix2c ra = partial_trace(prod, Subsystem::A).matrix();
    for (Outcome o : {Outcome::a, Outcome::b}) {
        ConditionalState s = post_measurement_state(prod, MeasurementBasis{0.7, 2.0}, o);
        CHECK((s.state.matrix() - ra).cwiseAbs().maxCoeff() < 1e-14);
    }

    ConditionalState onA = post_measurement_state(prod, MeasurementBasis{0.4, 1.0}, Outcome::b, Subsystem::A);
    CHECK(onA.state.label() == Subsystem::B);
    CHECK((onA.state.matrix() - partial_trace(prod, Subsystem::B).matrix()).cwiseAbs().maxCoeff() < 1e-14);

    CHECK_THROWS_KIND(post_measurement_state(DensityMatrix::basis(0), MeasurementBasis{0.0, 0.0}, Outcome::b),
                      ErrorKind::ConditionalUndefined);
}

TEST_CASE("conditional entropy examples") {
    CHECK(conditional_entropy(DensityMatrix::basis(1), MeasurementBasis{0.5, 1.0}) == doctest::Approx(0.0));
    DensityMatrix bell(bell_plus());
    for (double th : {0.0, 0.4, pi / 4})
        CHECK(std::abs(conditional_entropy(bell, MeasurementBasis{th, 1.3})) < 1e-12);
    CHECK(conditional_entropy(build_bell_diagonal(0.0, 0.0, 0.6), MeasurementBasis{0.0, 0.0}) ==
          doctest::Approx(h08));
    // The zero-probability branch of |00> measured in {|0>, |1>} contributes nothing.
    CHECK(conditional_entropy(DensityMatrix::basis(0), MeasurementBasis{0.0, 0.0}) == 0.0);
}

TEST_CASE("classical correlations and discord examples") {
    DensityMatrix bell(bell_plus());
    CHECK(classical_correlations(bell).value == doctest::Approx(1.0));
    CHECK(quantum_discord(bell) == doctest::Approx(1.0));
    DensityMatrix incoh = build_bell_diagonal(0.0, 0.0, 0.6);
    CHECK(classical_correlations(incoh).value == doctest::Approx(1.0 - h08).epsilon(1e-12));
    CHECK(std::abs(quantum_discord(incoh)) < 1e-12);
    DensityMatrix m = build_bell_diagonal(0.8, 0.8, -0.6);
    CHECK(classical_correlations(m).value == doctest::Approx(0.53100441).epsilon(1e-7));
    CHECK(quantum_discord(m) == doctest::Approx(0.5470675).epsilon(1e-6));
}

TEST_CASE("concurrence and entanglement of formation examples") {
    CHECK(concurrence(DensityMatrix(bell_plus())) == doctest::Approx(1.0));
    CHECK(concurrence(product_state()) < 1e-12);
    CHECK(concurrence(DensityMatrix::basis(2)) == 0.0);
    CHECK(concurrence(AlphaState{0.25, 0.7}.density()) == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-13));

    CHECK(eof_from_concurrence(1.0) == doctest::Approx(1.0));
    CHECK(eof_from_concurrence(0.0) == 0.0);
    CHECK(eof_from_concurrence(0.1) == doctest::Approx(0.025266127727120308).epsilon(1e-12));
    CHECK_THROWS_KIND(eof_from_concurrence(1.1), ErrorKind::InvalidArgument);
    CHECK_THROWS_KIND(eof_from_concurrence(-0.1), ErrorKind::InvalidArgument);
}

TEST_CASE("concurrence agrees with the Hermitian route") {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 300; ++k) {
        Matrix4c m;
        if (k % 3 == 0) {
            // Rank two.
            Vector4c v = oracle::random_pure(rng);
            Vector4c w = oracle::random_pure(rng);
            m = 0.85 * v * v.adjoint() + 0.15 * w * w.adjoint();
        } else {
            m = oracle::random_state(rng);
        }
        CHECK(std::abs(concurrence(DensityMatrix(m)) - oracle::concurrence_hermitian(m)) < 1e-6);
    }
    // Pure states: C = sqrt(2 (1 - tr rho_A^2)).
    for (int k = 0; k < 200; ++k) {
        DensityMatrix rho(PureState(oracle::random_pure(rng)));
        Matrix2c a = partial_trace(rho, Subsystem::A).matrix();
        double expected = std::sqrt(std::max(0.0, 2.0 * (1.0 - (a * a).trace().real())));
        CHECK(std::abs(concurrence(rho) - expected) < 1e-12);
        CHECK(std::abs(eof(rho) - von_neumann_entropy(partial_trace(rho, Subsystem::A))) < 1e-10);
    }
}

TEST_CASE("entanglement of formation is strictly increasing in C") {
    double prev = -1.0;
    for (int i = 0; i <= 10000; ++i) {
        double e = eof_from_concurrence(i / 10000.0);
        CHECK(e > prev);
        prev = e;
    }
}

TEST_CASE("X-state closed forms") {
    XStateBranches sym = xstate_conditional_entropy_branches(AlphaState{0.5, 0.0}.density());
    CHECK(std::abs(sym.computational) < 1e-12);
    CHECK(std::abs(sym.diagonal) < 1e-12);
    CHECK(xstate_concurrence(AlphaState{0.5, 0.0}.density()) == doctest::Approx(1.0));
    CHECK(xstate_concurrence(AlphaState{1.0, 0.0}.density()) == 0.0);

    SystemParams p;
    p.V = 2.0;
    DensityMatrix r = analytic_evolution(AlphaState{0.0, 0.0}, p, 1.0);
    CHECK(std::abs(xstate_concurrence(r) - concurrence(r)) < 1e-9);

    CHECK(has_emitter_x_structure(DensityMatrix(bell_plus())));
    CHECK_FALSE(has_emitter_x_structure(product_state()));
    CHECK_THROWS_KIND(xstate_concurrence(product_state()), ErrorKind::NonXStructure);
    CHECK_THROWS_KIND(xstate_conditional_entropy_branches(DensityMatrix::basis(3)), ErrorKind::NonXStructure);
}

TEST_CASE("X-state branches bound the optimizer from above") {
    std::mt19937_64 rng(32);
    for (int k = 0; k < 200; ++k) {
        DensityMatrix x(random_x_state(rng));
        XStateBranches br = xstate_conditional_entropy_branches(x);
        double best = minimize_conditional_entropy(x).entropy;
        CHECK(std::min(br.computational, br.diagonal) >= best - 1e-12);
        CHECK(std::abs(xstate_concurrence(x) - concurrence(x)) < 1e-9);
    }
}

TEST_CASE("X-state branches are not always the minimum") {
    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = 0.03457801414;
    m(1, 1) = 0.9622944243;
    m(2, 2) = 0.003127561558;
    m(3, 3) = 1.0 - m(0, 0).real() - m(1, 1).real() - m(2, 2).real();
    m(1, 2) = m(2, 1) = 0.03852905393;
    DensityMatrix x(m);
    XStateBranches br = xstate_conditional_entropy_branches(x);
    double best = minimize_conditional_entropy(x).entropy;
    CHECK(std::min(br.computational, br.diagonal) - best > 1e-4);
    CHECK(std::abs(best - oracle::min_conditional_entropy(m, 512).entropy) < 1e-6);
}

TEST_CASE("X-state branches are exact on symmetric-family trajectories") {
    SystemParams p;
    p.V = 2.0;
    p.gamma = 0.5;
    for (double alpha : {0.0, 0.3, 0.7, 1.0}) {
        auto ev = propagate(AlphaState{alpha, 0.0}.density(), p, 5.0, 26);
        for (const auto& s : ev.states) {
            XStateBranches br = xstate_conditional_entropy_branches(s);
            CHECK(std::abs(std::min(br.computational, br.diagonal) - minimize_conditional_entropy(s).entropy) < 1e-6);
        }
    }
}

TEST_CASE("symmetric family prefers the diagonal branch") {
    SystemParams p;
    p.V = 2.03;
    p.gamma = 0.91;
    auto ev = propagate(AlphaState{0.5, 0.0}.density(), p, 10.0, 101);
    for (const auto& s : ev.states) {
        XStateBranches br = xstate_conditional_entropy_branches(s);
        CHECK(br.diagonal <= br.computational + 1e-12);
        CHECK(entropy_bound_check(s) >= -1e-7);
    }
}

TEST_CASE("entropy bound examples") {
    CHECK(std::abs(entropy_bound_check(product_state())) < 1e-12);
    CHECK(entropy_bound_check(build_bell_diagonal(0.8, 0.8, -0.6)) == doctest::Approx(0.016063).epsilon(1e-4));
}

TEST_CASE("correlation records") {
    CorrelationRecord b = correlation_record(DensityMatrix(bell_plus()), 0.5);
    CHECK(b.t == 0.5);
    CHECK(b.MI == doctest::Approx(2.0));
    CHECK(b.CC == doctest::Approx(1.0));
    CHECK(b.QD == doctest::Approx(1.0));
    CHECK(b.C == doctest::Approx(1.0));
    CHECK(b.EoF == doctest::Approx(1.0));

    CorrelationRecord g = correlation_record(DensityMatrix::basis(0), 0.0);
    CHECK(std::abs(g.MI) + std::abs(g.CC) + std::abs(g.QD) + g.C + g.EoF < 1e-12);

    DensityMatrix m = build_bell_diagonal(0.8, 0.8, -0.6);
    CorrelationRecord r = correlation_record(m, 0.0);
    double c = oracle::concurrence_hermitian(m.matrix());
    CHECK(r.C == doctest::Approx(c).epsilon(1e-9));
    CHECK(r.C == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(r.EoF == eof_from_concurrence(r.C));
}

TEST_CASE("additivity and discord bounds on random states") {
    std::mt19937_64 rng(33);
    for (int k = 0; k < 1000; ++k) {
        DensityMatrix rho(oracle::random_state(rng));
        CorrelationRecord r = correlation_record(rho, 0.0);
        CHECK(std::abs(r.MI - r.QD - r.CC) <= 1e-6);
        CHECK(r.MI >= 0.0);
        CHECK(r.CC >= 0.0);
        CHECK(r.QD >= -1e-7);
        CHECK(r.QD <= von_neumann_entropy(partial_trace(rho, Subsystem::B)) + 1e-7);
    }
}

TEST_CASE("pure-state discord equals the marginal entropy") {
    std::mt19937_64 rng(34);
    for (int k = 0; k < 200; ++k) {
        DensityMatrix rho(PureState(oracle::random_pure(rng)));
        double sb = von_neumann_entropy(partial_trace(rho, Subsystem::B));
        CHECK(std::abs(quantum_discord(rho) - sb) <= 1e-6);
    }
}

TEST_CASE("classical-quantum states have zero discord") {
    std::mt19937_64 rng(35);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        double q = u(rng);
        Matrix4c m = Matrix4c::Zero();
        for (int j = 0; j < 2; ++j) {
            Matrix2c a = oracle::random_state(rng).topLeftCorner<2, 2>();
            a /= a.trace().real();
            Matrix2c pj = Matrix2c::Zero();
            pj(j, j) = 1.0;
            m += (j == 0 ? q : 1.0 - q) * kron(a, pj);
        }
        CHECK(quantum_discord(DensityMatrix(m)) <= 1e-6);
    }
}

TEST_CASE("measuring A equals measuring B on the swapped state") {
    std::mt19937_64 rng(36);
    for (int k = 0; k < 20; ++k) {
        Matrix4c m = oracle::random_state(rng);
        double onA = quantum_discord(DensityMatrix(m), Subsystem::A);
        double onB = quantum_discord(DensityMatrix(swap_qubits(m)), Subsystem::B);
        CHECK(std::abs(onA - onB) < 1e-9);
    }
}

TEST_CASE("batch records do not depend on the thread count") {
    SystemParams p;
    p.V = 1.2;
    p.gamma = 0.8;
    p.ell1 = p.ell2 = 0.4;
    auto ev = propagate(DensityMatrix::basis(3), p, 5.0, 41);
    auto one = correlation_records(ev, 1);
    auto three = correlation_records(ev, 3);
    REQUIRE(one.size() == three.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].MI == three[i].MI);
        CHECK(one[i].CC == three[i].CC);
        CHECK(one[i].QD == three[i].QD);
        CHECK(one[i].C == three[i].C);
    }
}
