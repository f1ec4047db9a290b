#pragma once

#include <complex>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "emitcorr/error.hpp"

namespace emitcorr {

using cplx = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

/// Thresholds shared by every state check in the library.
namespace tolerance {
inline constexpr double hermiticity = 1e-9;
inline constexpr double trace = 1e-9;
/// Eigenvalues in [-negativity, 0) are roundoff and clamp to zero.
inline constexpr double negativity = 1e-8;
inline constexpr double pure_norm = 1e-12;
} // namespace tolerance

/// Qubit A is the left tensor factor: basis order |00>, |01>, |10>, |11>.
enum class Subsystem { A, B };

Subsystem parse_subsystem(std::string_view label);
char to_char(Subsystem s);

namespace pauli {
Matrix2c identity();
Matrix2c x();
Matrix2c y();
Matrix2c z();
/// |1><0| with |0> the ground state.
Matrix2c raising();
Matrix2c lowering();
} // namespace pauli

Matrix4c kron(const Matrix2c& left, const Matrix2c& right);

struct ValidationReport {
    double hermiticity_defect = 0.0;
    double trace_defect = 0.0;
    double min_eigenvalue = 0.0;

    bool hermitian() const { return hermiticity_defect <= tolerance::hermiticity; }
    bool unit_trace() const { return trace_defect <= tolerance::trace; }
    bool positive() const { return min_eigenvalue >= -tolerance::negativity; }
    bool ok() const { return hermitian() && unit_trace() && positive(); }

    std::string describe() const;
};

/// Works for any square matrix; the eigenvalue check uses the Hermitian part.
ValidationReport validate_state(const Eigen::Ref<const Eigen::MatrixXcd>& m);

class PureState {
public:
    /// Throws NonPhysicalState unless the norm is 1 within 1e-12.
    explicit PureState(const Vector4c& amplitudes);
    static PureState normalized(const Vector4c& v);

    const Vector4c& amplitudes() const { return amplitudes_; }

private:
    Vector4c amplitudes_;
};

/// Two-qubit state. Construction validates Hermiticity, unit trace and
/// positivity at the thresholds in `tolerance`.
class DensityMatrix {
public:
    explicit DensityMatrix(const Matrix4c& m);
    DensityMatrix(const PureState& psi);

    /// Computational basis projector, index in [0, 4).
    static DensityMatrix basis(int index);

    const Matrix4c& matrix() const { return m_; }
    cplx operator()(int row, int col) const { return m_(row, col); }

    /// Ascending eigenvalues, not clamped.
    Eigen::Vector4d eigenvalues() const;

private:
    Matrix4c m_;
};

class ReducedState {
public:
    ReducedState(const Matrix2c& m, Subsystem label);

    const Matrix2c& matrix() const { return m_; }
    Subsystem label() const { return label_; }
    Eigen::Vector2d eigenvalues() const;

private:
    Matrix2c m_;
    Subsystem label_;
};

DensityMatrix tensor_product(const ReducedState& a, const ReducedState& b);

ReducedState partial_trace(const DensityMatrix& rho, Subsystem keep);

/// Raw 2x2 partial traces without validation, for inner loops.
Matrix2c trace_out_b(const Matrix4c& m);
Matrix2c trace_out_a(const Matrix4c& m);

/// Eigenvalues of a 2x2 Hermitian matrix in ascending order.
Eigen::Vector2d hermitian_eigenvalues(const Matrix2c& m);

/// -sum l log2 l over a spectrum. Values in [-1e-8, 0) count as zero;
/// anything more negative throws NonPhysicalState.
double spectrum_entropy(std::span<const double> eigenvalues);

/// von Neumann entropy in bits.
double von_neumann_entropy(const DensityMatrix& rho);
double von_neumann_entropy(const ReducedState& rho);

/// h(x) = -x log2 x - (1-x) log2 (1-x).
double binary_entropy(double x);

} // namespace emitcorr
