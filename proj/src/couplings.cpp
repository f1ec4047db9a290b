#include "emitcorr/couplings.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "emitcorr/error.hpp"

namespace emitcorr {

namespace {

constexpr double unit_norm_tolerance = 1e-12;
constexpr double series_threshold = 1e-4;

// Orientation factors multiplying the far-field and near-field radial terms.
struct Orientation {
    double transverse;  // mu1.mu2 - (mu1.r)(mu2.r)
    double near_field;  // mu1.mu2 - 3 (mu1.r)(mu2.r)
};

Orientation orientation(const EmitterGeometry& g) {
    double m12 = g.mu1_hat.dot(g.mu2_hat);
    double m1r = g.mu1_hat.dot(g.r12_hat);
    double m2r = g.mu2_hat.dot(g.r12_hat);
    return {m12 - m1r * m2r, m12 - 3.0 * m1r * m2r};
}

// The coherent and dissipative parts carry 3/4 and 3/2 of sqrt(Gamma1 Gamma2)
// respectively; with these the z -> 0 limit of gamma is sqrt(Gamma1 Gamma2) mu1.mu2.
double coherent_prefactor(const EmitterGeometry& g) { return 0.75 * std::sqrt(g.Gamma1 * g.Gamma2); }
double dissipative_prefactor(const EmitterGeometry& g) { return 1.5 * std::sqrt(g.Gamma1 * g.Gamma2); }

void check_unit(const Eigen::Vector3d& v, const char* name) {
    if (!v.allFinite() || std::abs(v.norm() - 1.0) > unit_norm_tolerance) {
        std::ostringstream os;
        os << name << " must be a unit vector (norm " << v.norm() << ")";
        throw Error(ErrorKind::InvalidArgument, os.str());
    }
}

} // namespace

EmitterGeometry EmitterGeometry::parallel_transverse(double r12_over_lambda0, double n,
                                                     double Gamma1, double Gamma2) {
    EmitterGeometry g;
    g.mu1_hat = {1.0, 0.0, 0.0};
    g.mu2_hat = {1.0, 0.0, 0.0};
    g.r12_hat = {0.0, 0.0, 1.0};
    g.r12_over_lambda0 = r12_over_lambda0;
    g.n = n;
    g.Gamma1 = Gamma1;
    g.Gamma2 = Gamma2;
    return g;
}

void EmitterGeometry::validate() const {
    check_unit(mu1_hat, "mu1_hat");
    check_unit(mu2_hat, "mu2_hat");
    check_unit(r12_hat, "r12_hat");
    if (!(r12_over_lambda0 >= 0.0) || !std::isfinite(r12_over_lambda0))
        throw Error(ErrorKind::InvalidArgument, "r12_over_lambda0 must be non-negative");
    if (!(n >= 1.0) || !std::isfinite(n))
        throw Error(ErrorKind::InvalidArgument, "refractive index must be >= 1");
    if (!(Gamma1 > 0.0) || !(Gamma2 > 0.0))
        throw Error(ErrorKind::InvalidArgument, "spontaneous rates must be positive");
}

double EmitterGeometry::z() const { return 2.0 * std::numbers::pi * n * r12_over_lambda0; }

double coupling_strength(const EmitterGeometry& g) {
    g.validate();
    double z = g.z();
    if (z == 0.0)
        throw Error(ErrorKind::SingularSeparation, "coupling strength diverges at zero separation");
    Orientation o = orientation(g);
    double c = std::cos(z);
    double s = std::sin(z);
    double far = -o.transverse * c / z;
    double near = o.near_field * (c / (z * z * z) + s / (z * z));
    return coherent_prefactor(g) * (far + near);
}

double collective_decay(const EmitterGeometry& g) {
    g.validate();
    double z = g.z();
    Orientation o = orientation(g);
    double sinc;
    double near_radial;  // cos z / z^2 - sin z / z^3
    if (z < series_threshold) {
        double z2 = z * z;
        sinc = 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
        near_radial = -1.0 / 3.0 + z2 / 30.0 - z2 * z2 / 840.0;
    } else {
        sinc = std::sin(z) / z;
        near_radial = std::cos(z) / (z * z) - std::sin(z) / (z * z * z);
    }
    return dissipative_prefactor(g) * (o.transverse * sinc + o.near_field * near_radial);
}

CouplingSet couplings(const EmitterGeometry& g) { return {coupling_strength(g), collective_decay(g)}; }

CouplingSet small_separation_limit(const EmitterGeometry& g) {
    g.validate();
    if (!(g.r12_over_lambda0 < small_separation_max)) {
        std::ostringstream os;
        os << "small-separation limit needs r12/lambda0 < " << small_separation_max << ", got "
           << g.r12_over_lambda0;
        throw Error(ErrorKind::OutsideApplicability, os.str());
    }
    double z = g.z();
    if (z == 0.0)
        throw Error(ErrorKind::SingularSeparation, "coupling strength diverges at zero separation");
    Orientation o = orientation(g);
    CouplingSet out;
    out.V = coherent_prefactor(g) * o.near_field / (z * z * z);
    out.gamma = std::sqrt(g.Gamma1 * g.Gamma2) * g.mu1_hat.dot(g.mu2_hat);
    return out;
}

} // namespace emitcorr
