#pragma once

#include <Eigen/Dense>

namespace emitcorr {

/// Two emitters with fixed dipole orientations at separation r12. Rates are
/// in units of a reference rate Gamma; the separation is in units of the
/// transition wavelength lambda0.
struct EmitterGeometry {
    Eigen::Vector3d mu1_hat{1.0, 0.0, 0.0};
    Eigen::Vector3d mu2_hat{1.0, 0.0, 0.0};
    Eigen::Vector3d r12_hat{0.0, 0.0, 1.0};
    double r12_over_lambda0 = 0.1;
    double n = 1.0;
    double Gamma1 = 1.0;
    double Gamma2 = 1.0;

    /// Parallel dipoles perpendicular to the separation vector.
    static EmitterGeometry parallel_transverse(double r12_over_lambda0, double n = 1.0,
                                               double Gamma1 = 1.0, double Gamma2 = 1.0);

    /// Throws InvalidArgument on non-unit directions, negative separation,
    /// n < 1 or non-positive rates.
    void validate() const;

    /// Reduced separation z = n k0 r12 = 2 pi n r12 / lambda0.
    double z() const;
};

struct CouplingSet {
    double V = 0.0;
    double gamma = 0.0;
};

/// Coherent dipole-dipole exchange strength. Throws SingularSeparation at z = 0.
double coupling_strength(const EmitterGeometry& g);

/// Collective decay rate; regular at z = 0 where it equals
/// sqrt(Gamma1 Gamma2) mu1.mu2.
double collective_decay(const EmitterGeometry& g);

CouplingSet couplings(const EmitterGeometry& g);

/// Leading near-field terms, only for r12 < 0.05 lambda0.
CouplingSet small_separation_limit(const EmitterGeometry& g);

inline constexpr double small_separation_max = 0.05;

} // namespace emitcorr
