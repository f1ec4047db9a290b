#pragma once

#include <random>
#include <vector>

#include "emitcorr/core.hpp"

// Reference computations kept deliberately apart from the production code
// paths: full 4x4 projector algebra, generic eigen-solvers and a different
// local optimizer. Used by the unit tests and by `verify`.
namespace emitcorr::oracle {

/// sum_j p_j S(rho_A|j) built from I x |v><v| projectors on B.
double conditional_entropy(const Matrix4c& rho, double theta, double phi);

struct GridMinimum {
    double entropy;
    double theta;
    double phi;
};

/// n x n grid over theta in [0, pi/2], phi in [0, 2 pi), then Nelder-Mead
/// from the best cell.
GridMinimum min_conditional_entropy(const Matrix4c& rho, int n = 512);

/// S(rho_A) - oracle minimum, entropies via SelfAdjointEigenSolver.
double classical_correlations(const Matrix4c& rho, int n = 512);

/// Concurrence from the Hermitian matrix sqrt(rho) rho_tilde sqrt(rho).
double concurrence_hermitian(const Matrix4c& rho);

/// Entropy in bits through a generic eigen-solver.
double entropy(const Eigen::MatrixXcd& rho);

/// Random full-rank state G G^dagger / tr, G with standard normal entries.
Matrix4c random_state(std::mt19937_64& rng);

/// Haar-ish random pure state from normalized Gaussian amplitudes.
Vector4c random_pure(std::mt19937_64& rng);

/// Random 4x4 unitary from the QR decomposition of a Gaussian matrix.
Matrix4c random_unitary(std::mt19937_64& rng);

/// Least-squares slope of log(y) against t, returned as a positive rate.
double fitted_decay_rate(const std::vector<double>& t, const std::vector<double>& y);

} // namespace emitcorr::oracle
