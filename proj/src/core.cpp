#include "emitcorr/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace emitcorr {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::NonPhysicalState: return "non-physical-state";
    case ErrorKind::SingularSeparation: return "singular-separation";
    case ErrorKind::OutsideApplicability: return "outside-applicability";
    case ErrorKind::AnalyticFormUnavailable: return "analytic-form-unavailable";
    case ErrorKind::InvalidBellDiagonal: return "invalid-bell-diagonal";
    case ErrorKind::ConditionalUndefined: return "conditional-undefined";
    case ErrorKind::NonXStructure: return "non-x-structure";
    case ErrorKind::NumericalFailure: return "numerical-failure";
    case ErrorKind::PropagationDiverged: return "propagation-diverged";
    case ErrorKind::ConfigParse: return "config-parse";
    }
    return "unknown";
}

Subsystem parse_subsystem(std::string_view label) {
    if (label == "A" || label == "a") return Subsystem::A;
    if (label == "B" || label == "b") return Subsystem::B;
    throw Error(ErrorKind::InvalidArgument,
                "invalid subsystem label '" + std::string(label) + "' (expected A or B)");
}

char to_char(Subsystem s) { return s == Subsystem::A ? 'A' : 'B'; }

namespace pauli {
Matrix2c identity() { return Matrix2c::Identity(); }

Matrix2c x() {
    Matrix2c m;
    m << 0, 1, 1, 0;
    return m;
}

Matrix2c y() {
    Matrix2c m;
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}

Matrix2c z() {
    Matrix2c m;
    m << 1, 0, 0, -1;
    return m;
}

Matrix2c raising() {
    Matrix2c m = Matrix2c::Zero();
    m(1, 0) = 1.0;
    return m;
}

Matrix2c lowering() {
    Matrix2c m = Matrix2c::Zero();
    m(0, 1) = 1.0;
    return m;
}
} // namespace pauli

Matrix4c kron(const Matrix2c& left, const Matrix2c& right) {
    Matrix4c out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = left(i, j) * right;
    return out;
}

std::string ValidationReport::describe() const {
    std::ostringstream os;
    os << (ok() ? "pass" : "fail") << ": hermiticity defect " << hermiticity_defect
       << ", trace defect " << trace_defect << ", min eigenvalue " << min_eigenvalue;
    if (!hermitian()) os << " [non-hermitian]";
    if (!unit_trace()) os << " [trace]";
    if (!positive()) os << " [negativity]";
    return os.str();
}

ValidationReport validate_state(const Eigen::Ref<const Eigen::MatrixXcd>& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw Error(ErrorKind::InvalidArgument, "state matrix must be square");
    ValidationReport r;
    r.hermiticity_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    r.trace_defect = std::abs(m.trace() - cplx(1.0, 0.0));
    Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    return r;
}

PureState::PureState(const Vector4c& amplitudes) : amplitudes_(amplitudes) {
    double norm = amplitudes.norm();
    if (std::abs(norm - 1.0) > tolerance::pure_norm) {
        std::ostringstream os;
        os << "pure state norm " << norm << " differs from 1";
        throw Error(ErrorKind::NonPhysicalState, os.str());
    }
}

PureState PureState::normalized(const Vector4c& v) {
    double norm = v.norm();
    if (norm == 0.0) throw Error(ErrorKind::NonPhysicalState, "cannot normalize zero vector");
    return PureState(v / norm);
}

namespace {
void require_valid(const Eigen::Ref<const Eigen::MatrixXcd>& m, const char* what) {
    ValidationReport r = validate_state(m);
    if (!r.ok())
        throw Error(ErrorKind::NonPhysicalState, std::string(what) + " " + r.describe());
}
} // namespace

DensityMatrix::DensityMatrix(const Matrix4c& m) : m_(m) { require_valid(m_, "density matrix"); }

DensityMatrix::DensityMatrix(const PureState& psi)
    : m_(psi.amplitudes() * psi.amplitudes().adjoint()) {}

DensityMatrix DensityMatrix::basis(int index) {
    if (index < 0 || index > 3)
        throw Error(ErrorKind::InvalidArgument, "basis index must be in [0, 4)");
    Matrix4c m = Matrix4c::Zero();
    m(index, index) = 1.0;
    return DensityMatrix(m);
}

Eigen::Vector4d DensityMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

ReducedState::ReducedState(const Matrix2c& m, Subsystem label) : m_(m), label_(label) {
    require_valid(m_, "reduced state");
}

Eigen::Vector2d ReducedState::eigenvalues() const { return hermitian_eigenvalues(m_); }

DensityMatrix tensor_product(const ReducedState& a, const ReducedState& b) {
    return DensityMatrix(kron(a.matrix(), b.matrix()));
}

Matrix2c trace_out_b(const Matrix4c& m) {
    Matrix2c out;
    for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap)
            out(a, ap) = m(2 * a, 2 * ap) + m(2 * a + 1, 2 * ap + 1);
    return out;
}

Matrix2c trace_out_a(const Matrix4c& m) {
    Matrix2c out;
    for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp)
            out(b, bp) = m(b, bp) + m(2 + b, 2 + bp);
    return out;
}

ReducedState partial_trace(const DensityMatrix& rho, Subsystem keep) {
    switch (keep) {
    case Subsystem::A: return ReducedState(trace_out_b(rho.matrix()), Subsystem::A);
    case Subsystem::B: return ReducedState(trace_out_a(rho.matrix()), Subsystem::B);
    }
    throw Error(ErrorKind::InvalidArgument, "invalid subsystem label");
}

Eigen::Vector2d hermitian_eigenvalues(const Matrix2c& m) {
    double a = m(0, 0).real();
    double d = m(1, 1).real();
    double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m(0, 1)));
    double mid = 0.5 * (a + d);
    return {mid - half_gap, mid + half_gap};
}

double spectrum_entropy(std::span<const double> eigenvalues) {
    double s = 0.0;
    for (double l : eigenvalues) {
        if (l < -tolerance::negativity) {
            std::ostringstream os;
            os << "eigenvalue " << l << " below negativity threshold";
            throw Error(ErrorKind::NonPhysicalState, os.str());
        }
        if (l > 0.0) s -= l * std::log2(l);
    }
    return std::max(s, 0.0);
}

double von_neumann_entropy(const DensityMatrix& rho) {
    Eigen::Vector4d ev = rho.eigenvalues();
    return spectrum_entropy(std::span<const double>(ev.data(), 4));
}

double von_neumann_entropy(const ReducedState& rho) {
    Eigen::Vector2d ev = rho.eigenvalues();
    return spectrum_entropy(std::span<const double>(ev.data(), 2));
}

double binary_entropy(double x) {
    constexpr double slack = 1e-12;
    if (!(x >= -slack && x <= 1.0 + slack))
        throw Error(ErrorKind::InvalidArgument, "binary entropy argument outside [0, 1]");
    x = std::clamp(x, 0.0, 1.0);
    double s = 0.0;
    if (x > 0.0) s -= x * std::log2(x);
    if (x < 1.0) s -= (1.0 - x) * std::log2(1.0 - x);
    return s;
}

} // namespace emitcorr
