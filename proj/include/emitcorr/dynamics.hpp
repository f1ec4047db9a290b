#pragma once

#include <cstddef>
#include <vector>

#include "emitcorr/core.hpp"
#include "emitcorr/couplings.hpp"

namespace emitcorr {

/// Master-equation coefficients, all in units of the reference rate Gamma
/// (hbar = 1, energies as angular frequencies).
struct SystemParams {
    double V = 0.0;
    double gamma = 0.0;
    double Gamma1 = 1.0;
    double Gamma2 = 1.0;
    double delta_minus = 0.0;  // nu1 - nu2
    double delta_plus = 0.0;   // (nu1 + nu2)/2 - nu_L
    double ell1 = 0.0;
    double ell2 = 0.0;

    void validate() const;

    static SystemParams from_geometry(const EmitterGeometry& g);
};

/// sqrt(alpha)|01> + e^{i phi} sqrt(1 - alpha)|10>.
struct AlphaState {
    double alpha = 0.5;
    double phi = 0.0;

    void validate() const;
    PureState state() const;
    DensityMatrix density() const { return DensityMatrix(state()); }
};

struct EvolutionResult {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
};

using Liouvillian = Eigen::Matrix<cplx, 16, 16>;
using VecState = Eigen::Matrix<cplx, 16, 1>;

/// Rotating-frame Hamiltonian at the laser frequency.
Matrix4c build_hamiltonian(const SystemParams& p);

/// -i[H, rho] + L(rho) for an arbitrary 4x4 matrix.
Matrix4c lindblad_rhs(const Matrix4c& rho, const SystemParams& p);
Matrix4c lindblad_rhs(const DensityMatrix& rho, const SystemParams& p);

/// Superoperator acting on the row-major vectorization v[4 i + j] = rho(i, j).
Liouvillian build_liouvillian(const SystemParams& p);

VecState vectorize(const Matrix4c& m);
Matrix4c unvectorize(const VecState& v);

struct PropagationOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    /// Replace each reported sample by (rho + rho^dagger)/2.
    bool project = false;
    std::size_t max_steps = 50'000'000;
};

/// Uniform sample grid t_k = t_final k / (sample_count - 1), k = 0..sample_count-1.
std::vector<double> sample_times(double t_final, std::size_t sample_count);

/// Adaptive Dormand-Prince 5(4) integration of the master equation. Every
/// sample is validated; violations throw PropagationDiverged.
EvolutionResult propagate(const DensityMatrix& rho0, const SystemParams& p, double t_final,
                          std::size_t sample_count, const PropagationOptions& opts = {});

/// Same samples via the exponential of the Liouvillian.
EvolutionResult propagate_exact(const DensityMatrix& rho0, const SystemParams& p, double t_final,
                                std::size_t sample_count);

/// Null vector of the Liouvillian normalized to unit trace. Throws
/// NumericalFailure when the null space is not one-dimensional.
DensityMatrix stationary_state(const SystemParams& p);

/// Closed-form evolution of an alpha state for identical undriven emitters.
/// Throws AnalyticFormUnavailable when ell != 0, delta_minus != 0 or
/// Gamma1 != Gamma2.
DensityMatrix analytic_evolution(const AlphaState& s, const SystemParams& p, double t);

/// (I + h1 XX + h2 YY + h3 ZZ) / 4. Throws InvalidBellDiagonal if not PSD.
DensityMatrix build_bell_diagonal(double h1, double h2, double h3);

} // namespace emitcorr
