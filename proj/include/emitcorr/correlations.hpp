#pragma once

#include <vector>

#include "emitcorr/core.hpp"
#include "emitcorr/dynamics.hpp"

namespace emitcorr {

/// Rank-1 projective measurement on one qubit:
///   |a> = cos t |0> + e^{i p} sin t |1>,  |b> = e^{-i p} sin t |0> - cos t |1>.
struct MeasurementBasis {
    double theta_m = 0.0;
    double phi_m = 0.0;

    Eigen::Vector2cd a() const;
    Eigen::Vector2cd b() const;

    /// Same projector pair with theta_m in [0, pi/2] and phi_m in [0, 2 pi).
    MeasurementBasis canonical() const;
};

enum class Outcome { a, b };

struct ConditionalState {
    ReducedState state;
    double probability;
};

/// Measurement always acts on `measured`; the conditional state belongs to the
/// other qubit. Throws ConditionalUndefined when p <= 1e-14.
ConditionalState post_measurement_state(const DensityMatrix& rho, const MeasurementBasis& basis,
                                        Outcome outcome, Subsystem measured = Subsystem::B);

/// sum_j p_j S(rho_{A|j}); zero-probability branches contribute nothing.
double conditional_entropy(const DensityMatrix& rho, const MeasurementBasis& basis,
                           Subsystem measured = Subsystem::B);

struct OptimizerOptions {
    int grid = 64;
    /// Polish starts from this many of the best grid cells.
    int polish_starts = 3;
    double min_step = 1e-8;
    int max_iterations = 20000;
};

struct ConditionalMinimum {
    double entropy = 0.0;
    MeasurementBasis basis;
};

ConditionalMinimum minimize_conditional_entropy(const DensityMatrix& rho,
                                                Subsystem measured = Subsystem::B,
                                                const OptimizerOptions& opts = {});

double mutual_information(const DensityMatrix& rho);

struct ClassicalCorrelations {
    double value = 0.0;
    MeasurementBasis argmax;
};

ClassicalCorrelations classical_correlations(const DensityMatrix& rho,
                                             Subsystem measured = Subsystem::B,
                                             const OptimizerOptions& opts = {});

double quantum_discord(const DensityMatrix& rho, Subsystem measured = Subsystem::B,
                       const OptimizerOptions& opts = {});

/// Wootters concurrence. Throws NumericalFailure if rho rho_tilde has an
/// eigenvalue with imaginary part above 1e-6.
double concurrence(const DensityMatrix& rho);

/// E(C) = h((1 + sqrt(1 - C^2)) / 2).
double eof_from_concurrence(double c);
double eof(const DensityMatrix& rho);

struct XStateBranches {
    double computational;  // S1: B measured in {|0>, |1>}
    double diagonal;       // S2: B measured at theta_m = pi/4
};

/// Both candidate conditional entropies for states with the structure
/// produced by the undriven alpha-state dynamics (nonzero entries only at
/// 00/00, 01/01, 10/10, 01/10, 10/01). Throws NonXStructure otherwise.
XStateBranches xstate_conditional_entropy_branches(const DensityMatrix& rho);

/// 2 |rho_{01,10}| for the same class.
double xstate_concurrence(const DensityMatrix& rho);

/// True if every entry outside the structure above is below `tol`.
bool has_emitter_x_structure(const DensityMatrix& rho, double tol = 1e-10);

/// S(rho_B) + 2 min S(A|B) - S(rho_A) - S(rho_AB), which equals QD - CC.
double entropy_bound_check(const DensityMatrix& rho, Subsystem measured = Subsystem::B,
                           const OptimizerOptions& opts = {});

struct CorrelationRecord {
    double t = 0.0;
    double MI = 0.0;
    double CC = 0.0;
    double QD = 0.0;
    double C = 0.0;
    double EoF = 0.0;
    MeasurementBasis argmax_basis;
};

CorrelationRecord correlation_record(const DensityMatrix& rho, double t,
                                     Subsystem measured = Subsystem::B,
                                     const OptimizerOptions& opts = {});

/// One record per sample. Samples are split across up to `threads` workers;
/// output order and values do not depend on the split.
std::vector<CorrelationRecord> correlation_records(const EvolutionResult& evolution,
                                                   unsigned threads = 1,
                                                   Subsystem measured = Subsystem::B);

} // namespace emitcorr
