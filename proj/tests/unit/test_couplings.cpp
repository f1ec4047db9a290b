#include <cmath>

#include "emitcorr/couplings.hpp"
#include "helpers.hpp"

using namespace emitcorr;

TEST_CASE("parallel transverse dipoles at the weak-coupling points") {
    CouplingSet a = couplings(EmitterGeometry::parallel_transverse(0.125));
    CHECK(a.V == doctest::Approx(1.0 / 0.7818).epsilon(1e-3));
    CHECK(a.gamma == doctest::Approx(0.6884 / 0.7818).epsilon(1e-3));
    CouplingSet b = couplings(EmitterGeometry::parallel_transverse(0.108));
    CHECK(b.V == doctest::Approx(2.03).epsilon(2e-3));
    CHECK(b.gamma == doctest::Approx(0.91).epsilon(2e-3));
}

TEST_CASE("closed forms at z = pi/2") {
    // r12 = lambda0 / 4: cos z = 0, sin z = 1.
    EmitterGeometry g = EmitterGeometry::parallel_transverse(0.25);
    const double z = testing::pi / 2;
    CHECK(g.z() == doctest::Approx(z));
    CHECK(coupling_strength(g) == doctest::Approx(0.75 / (z * z)));
    CHECK(collective_decay(g) == doctest::Approx(1.5 * (1.0 / z - 1.0 / (z * z * z))));
}

TEST_CASE("orthogonal dipoles do not couple") {
    EmitterGeometry g = EmitterGeometry::parallel_transverse(0.1);
    g.mu2_hat = Eigen::Vector3d(0.0, 1.0, 0.0);
    CouplingSet c = couplings(g);
    CHECK(c.V == doctest::Approx(0.0));
    CHECK(c.gamma == doctest::Approx(0.0));
}

TEST_CASE("collective decay is regular at zero separation") {
    EmitterGeometry g = EmitterGeometry::parallel_transverse(0.0);
    CHECK(collective_decay(g) == doctest::Approx(1.0));
    CHECK_THROWS_KIND(coupling_strength(g), ErrorKind::SingularSeparation);

    // The series branch and the direct formula agree across the switch, up to
    // cancellation in the direct formula.
    EmitterGeometry below = EmitterGeometry::parallel_transverse(0.99e-4 / (2 * testing::pi));
    EmitterGeometry above = EmitterGeometry::parallel_transverse(1.01e-4 / (2 * testing::pi));
    CHECK(std::abs(collective_decay(below) - collective_decay(above)) < 1e-7);

    EmitterGeometry radial = g;
    radial.mu1_hat = radial.mu2_hat = Eigen::Vector3d(0.0, 0.0, 1.0);
    radial.r12_over_lambda0 = 1e-7;
    CHECK(collective_decay(radial) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("small separation limit") {
    EmitterGeometry g = EmitterGeometry::parallel_transverse(0.02);
    CouplingSet lim = small_separation_limit(g);
    CHECK(lim.gamma == 1.0);
    CHECK(std::abs(lim.V - coupling_strength(g)) / std::abs(coupling_strength(g)) < 0.05);
    CHECK_THROWS_KIND(small_separation_limit(EmitterGeometry::parallel_transverse(0.2)),
                      ErrorKind::OutsideApplicability);
}

TEST_CASE("V r^3 converges as r -> 0") {
    auto scaled = [](double r) { return coupling_strength(EmitterGeometry::parallel_transverse(r)) * r * r * r; };
    double a = scaled(0.002), b = scaled(0.001);
    CHECK(std::abs(a - b) / std::abs(b) < 0.01);
}

TEST_CASE("swap symmetry and rate scaling") {
    EmitterGeometry g;
    g.mu1_hat = Eigen::Vector3d(1.0, 1.0, 0.5).normalized();
    g.mu2_hat = Eigen::Vector3d(0.2, -1.0, 1.0).normalized();
    g.r12_hat = Eigen::Vector3d(0.3, 0.4, 1.0).normalized();
    g.r12_over_lambda0 = 0.17;
    g.n = 1.4;
    g.Gamma1 = 0.8;
    g.Gamma2 = 1.7;
    CouplingSet c = couplings(g);

    EmitterGeometry swapped = g;
    std::swap(swapped.mu1_hat, swapped.mu2_hat);
    std::swap(swapped.Gamma1, swapped.Gamma2);
    CouplingSet s = couplings(swapped);
    CHECK(s.V == doctest::Approx(c.V).epsilon(1e-14));
    CHECK(s.gamma == doctest::Approx(c.gamma).epsilon(1e-14));

    EmitterGeometry scaled = g;
    scaled.Gamma1 *= 3.0;
    scaled.Gamma2 *= 3.0;
    CouplingSet k = couplings(scaled);
    CHECK(k.V == doctest::Approx(3.0 * c.V).epsilon(1e-13));
    CHECK(k.gamma == doctest::Approx(3.0 * c.gamma).epsilon(1e-13));
}

TEST_CASE("collective decay never exceeds sqrt(Gamma1 Gamma2)") {
    for (double r = 0.01; r <= 5.0; r += 0.001) {
        EmitterGeometry g = EmitterGeometry::parallel_transverse(r, 1.0, 0.5, 2.0);
        CHECK(std::abs(collective_decay(g)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("geometry validation") {
    EmitterGeometry g = EmitterGeometry::parallel_transverse(0.1);
    g.mu1_hat = Eigen::Vector3d(1.0, 1.0, 0.0);
    CHECK_THROWS_KIND(couplings(g), ErrorKind::InvalidArgument);
    CHECK_THROWS_KIND(couplings(EmitterGeometry::parallel_transverse(-0.1)), ErrorKind::InvalidArgument);
    CHECK_THROWS_KIND(couplings(EmitterGeometry::parallel_transverse(0.1, 0.9)), ErrorKind::InvalidArgument);
    CHECK_THROWS_KIND(couplings(EmitterGeometry::parallel_transverse(0.1, 1.0, 0.0)), ErrorKind::InvalidArgument);
}
