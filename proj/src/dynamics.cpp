#include "emitcorr/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace emitcorr {

namespace {

constexpr double rate_bound_slack = 1e-9;

struct LadderOps {
    Matrix4c up1, down1, up2, down2;
};

const LadderOps& ladder() {
    static const LadderOps ops{
        kron(pauli::raising(), pauli::identity()),
        kron(pauli::lowering(), pauli::identity()),
        kron(pauli::identity(), pauli::raising()),
        kron(pauli::identity(), pauli::lowering()),
    };
    return ops;
}

// -(G/2) (rho a b + a b rho - 2 c rho d)
Matrix4c dissipator_term(const Matrix4c& rho, double rate, const Matrix4c& anti,
                         const Matrix4c& jump_left, const Matrix4c& jump_right) {
    return -0.5 * rate * (rho * anti + anti * rho - 2.0 * jump_left * rho * jump_right);
}

} // namespace

void SystemParams::validate() const {
    const double all[] = {V, gamma, Gamma1, Gamma2, delta_minus, delta_plus, ell1, ell2};
    for (double x : all)
        if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "non-finite system parameter");
    if (!(Gamma1 > 0.0) || !(Gamma2 > 0.0))
        throw Error(ErrorKind::InvalidArgument, "Gamma1 and Gamma2 must be positive");
    if (std::abs(gamma) > std::sqrt(Gamma1 * Gamma2) + rate_bound_slack) {
        std::ostringstream os;
        os << "|gamma| = " << std::abs(gamma) << " exceeds sqrt(Gamma1 Gamma2)";
        throw Error(ErrorKind::InvalidArgument, os.str());
    }
}

SystemParams SystemParams::from_geometry(const EmitterGeometry& g) {
    CouplingSet c = couplings(g);
    SystemParams p;
    p.V = c.V;
    p.gamma = c.gamma;
    p.Gamma1 = g.Gamma1;
    p.Gamma2 = g.Gamma2;
    return p;
}

void AlphaState::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw Error(ErrorKind::InvalidArgument, "alpha must lie in [0, 1]");
    if (!std::isfinite(phi)) throw Error(ErrorKind::InvalidArgument, "phase must be finite");
}

PureState AlphaState::state() const {
    validate();
    Vector4c v = Vector4c::Zero();
    v(1) = std::sqrt(alpha);
    v(2) = std::polar(std::sqrt(1.0 - alpha), phi);
    return PureState::normalized(v);
}

Matrix4c build_hamiltonian(const SystemParams& p) {
    const LadderOps& op = ladder();
    const Matrix2c I = pauli::identity();
    double detuning1 = p.delta_plus + 0.5 * p.delta_minus;
    double detuning2 = p.delta_plus - 0.5 * p.delta_minus;
    Matrix4c h = -0.5 * detuning1 * kron(pauli::z(), I) - 0.5 * detuning2 * kron(I, pauli::z());
    h += p.V * (op.up1 * op.down2 + op.down1 * op.up2);
    h += p.ell1 * (op.up1 + op.down1) + p.ell2 * (op.up2 + op.down2);
    return h;
}

Matrix4c lindblad_rhs(const Matrix4c& rho, const SystemParams& p) {
    const LadderOps& op = ladder();
    Matrix4c h = build_hamiltonian(p);
    const cplx i(0.0, 1.0);
    Matrix4c out = -i * (h * rho - rho * h);
    out += dissipator_term(rho, p.Gamma1, op.up1 * op.down1, op.down1, op.up1);
    out += dissipator_term(rho, p.Gamma2, op.up2 * op.down2, op.down2, op.up2);
    // Gamma12 = Gamma21 = gamma (real).
    out += dissipator_term(rho, p.gamma, op.up1 * op.down2, op.down1, op.up2);
    out += dissipator_term(rho, p.gamma, op.up2 * op.down1, op.down2, op.up1);
    return out;
}

Matrix4c lindblad_rhs(const DensityMatrix& rho, const SystemParams& p) {
    return lindblad_rhs(rho.matrix(), p);
}

VecState vectorize(const Matrix4c& m) {
    VecState v;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) v(4 * r + c) = m(r, c);
    return v;
}

Matrix4c unvectorize(const VecState& v) {
    Matrix4c m;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = v(4 * r + c);
    return m;
}

Liouvillian build_liouvillian(const SystemParams& p) {
    Liouvillian L;
    for (int k = 0; k < 16; ++k) {
        Matrix4c unit = Matrix4c::Zero();
        unit(k / 4, k % 4) = 1.0;
        L.col(k) = vectorize(lindblad_rhs(unit, p));
    }
    return L;
}

std::vector<double> sample_times(double t_final, std::size_t sample_count) {
    if (!(t_final > 0.0) || !std::isfinite(t_final))
        throw Error(ErrorKind::InvalidArgument, "t_final must be positive");
    if (sample_count < 2) throw Error(ErrorKind::InvalidArgument, "need at least two samples");
    std::vector<double> times(sample_count);
    for (std::size_t k = 0; k < sample_count; ++k)
        times[k] = t_final * static_cast<double>(k) / static_cast<double>(sample_count - 1);
    times.back() = t_final;
    return times;
}

namespace {

DensityMatrix checked_sample(const VecState& v, std::size_t index, double t, bool project) {
    Matrix4c m = unvectorize(v);
    if (project) m = 0.5 * (m + m.adjoint()).eval();
    ValidationReport r = validate_state(m);
    if (!r.ok()) {
        std::ostringstream os;
        os << "state left the physical set at sample " << index << " (t = " << t
           << "): " << r.describe();
        throw PropagationError(index, os.str());
    }
    return DensityMatrix(m);
}

// Dormand-Prince 5(4) tableau.
namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
} // namespace dp

class DormandPrince {
public:
    DormandPrince(const Liouvillian& L, const PropagationOptions& opts) : L_(L), opts_(opts) {}

    /// Advances y from t to t_end exactly, reusing the step-size estimate.
    void advance(VecState& y, double& t, double t_end) {
        if (!have_k1_) {
            k1_ = L_ * y;
            have_k1_ = true;
        }
        if (h_ <= 0.0) h_ = initial_step(t_end - t);
        while (t < t_end) {
            if (++steps_ > opts_.max_steps)
                throw Error(ErrorKind::NumericalFailure, "integrator exceeded the step budget");
            bool last = false;
            double h = h_;
            if (t + h >= t_end) {
                h = t_end - t;
                last = true;
            }
            double err = attempt(y, h);
            if (!std::isfinite(err))
                throw Error(ErrorKind::NumericalFailure, "integrator produced non-finite values");
            double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            if (err <= 1.0) {
                y = y_new_;
                k1_ = k7_;
                t = last ? t_end : t + h;
                // A clipped final step says nothing about the natural step size.
                if (!last || factor < 1.0) h_ = h * factor;
            } else {
                h_ = h * std::min(factor, 1.0);
                if (h_ < 1e-14 * std::max(1.0, std::abs(t)))
                    throw Error(ErrorKind::NumericalFailure, "integrator step size underflow");
            }
        }
    }

private:
    double initial_step(double span) const {
        double scale = L_.cwiseAbs().rowwise().sum().maxCoeff();
        double h = scale > 0.0 ? 0.01 / scale : span;
        return std::min(h, span);
    }

    double attempt(const VecState& y, double h) {
        using namespace dp;
        VecState k2 = L_ * (y + h * a21 * k1_);
        VecState k3 = L_ * (y + h * (a31 * k1_ + a32 * k2));
        VecState k4 = L_ * (y + h * (a41 * k1_ + a42 * k2 + a43 * k3));
        VecState k5 = L_ * (y + h * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4));
        VecState k6 = L_ * (y + h * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        y_new_ = y + h * (b1 * k1_ + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        k7_ = L_ * y_new_;
        VecState e = h * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7_);
        double sum = 0.0;
        for (int i = 0; i < 16; ++i) {
            double sc = opts_.atol + opts_.rtol * std::max(std::abs(y(i)), std::abs(y_new_(i)));
            double r = std::abs(e(i)) / sc;
            sum += r * r;
        }
        return std::sqrt(sum / 16.0);
    }

    const Liouvillian& L_;
    PropagationOptions opts_;
    VecState k1_, k7_, y_new_;
    bool have_k1_ = false;
    double h_ = 0.0;
    std::size_t steps_ = 0;
};

} // namespace

EvolutionResult propagate(const DensityMatrix& rho0, const SystemParams& p, double t_final,
                          std::size_t sample_count, const PropagationOptions& opts) {
    p.validate();
    if (!(opts.rtol > 0.0) || !(opts.atol > 0.0))
        throw Error(ErrorKind::InvalidArgument, "integrator tolerances must be positive");
    EvolutionResult out;
    out.times = sample_times(t_final, sample_count);
    out.states.reserve(sample_count);

    const Liouvillian L = build_liouvillian(p);
    DormandPrince stepper(L, opts);
    VecState y = vectorize(rho0.matrix());
    double t = 0.0;
    for (std::size_t k = 0; k < out.times.size(); ++k) {
        if (out.times[k] > t) stepper.advance(y, t, out.times[k]);
        out.states.push_back(checked_sample(y, k, out.times[k], opts.project));
    }
    return out;
}

EvolutionResult propagate_exact(const DensityMatrix& rho0, const SystemParams& p, double t_final,
                                std::size_t sample_count) {
    p.validate();
    EvolutionResult out;
    out.times = sample_times(t_final, sample_count);
    out.states.reserve(sample_count);
    const Liouvillian L = build_liouvillian(p);
    const VecState y0 = vectorize(rho0.matrix());
    for (std::size_t k = 0; k < out.times.size(); ++k) {
        Liouvillian step = (L * out.times[k]).exp();
        out.states.push_back(checked_sample(step * y0, k, out.times[k], false));
    }
    return out;
}

DensityMatrix stationary_state(const SystemParams& p) {
    p.validate();
    // L v = 0 together with tr rho = 1, solved in the least-squares sense.
    Eigen::Matrix<cplx, 17, 16> A;
    A.topRows<16>() = build_liouvillian(p);
    A.row(16).setZero();
    for (int i = 0; i < 4; ++i) A(16, 5 * i) = 1.0;
    Eigen::Matrix<cplx, 17, 1> b = Eigen::Matrix<cplx, 17, 1>::Zero();
    b(16) = 1.0;
    Eigen::ColPivHouseholderQR<Eigen::Matrix<cplx, 17, 16>> qr(A);
    qr.setThreshold(1e-10);
    if (qr.rank() < 16) throw Error(ErrorKind::NumericalFailure, "stationary state is not unique");
    VecState v = qr.solve(b);
    if ((A * v - b).norm() > 1e-9) throw Error(ErrorKind::NumericalFailure, "no stationary state found");
    Matrix4c m = unvectorize(v);
    return DensityMatrix(Matrix4c(0.5 * (m + m.adjoint())));
}

DensityMatrix analytic_evolution(const AlphaState& s, const SystemParams& p, double t) {
    p.validate();
    s.validate();
    if (p.ell1 != 0.0 || p.ell2 != 0.0)
        throw Error(ErrorKind::AnalyticFormUnavailable, "closed form requires no laser drive");
    if (p.delta_minus != 0.0)
        throw Error(ErrorKind::AnalyticFormUnavailable, "closed form requires identical emitters");
    if (p.Gamma1 != p.Gamma2)
        throw Error(ErrorKind::AnalyticFormUnavailable, "closed form requires Gamma1 == Gamma2");
    if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "time must be non-negative");

    const double G = p.Gamma1;
    const double g = p.gamma;
    const double f = std::sqrt(s.alpha * (1.0 - s.alpha));
    const double theta = 2.0 * p.V * t;
    const double cphi = std::cos(s.phi);
    const double sphi = std::sin(s.phi);
    const double e2g = std::exp(2.0 * g * t);
    const double eG = std::exp(-G * t);
    const double eg = std::exp(-g * t);

    // Excitation stays in the single-excitation sector; everything not in it
    // has decayed to |00>.
    const double sector = eg * (1.0 + e2g + 2.0 * f * (1.0 - e2g) * cphi);
    const double beat = (2.0 - 4.0 * s.alpha) * std::cos(theta) - 4.0 * f * sphi * std::sin(theta);

    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = 1.0 - 0.5 * eG * sector;
    m(1, 1) = 0.25 * eG * (sector - beat);
    m(2, 2) = 0.25 * eG * (sector + beat);
    const double re = eg * (1.0 - e2g + 2.0 * f * (1.0 + e2g) * cphi);
    const double im = -2.0 * (2.0 * f * sphi * std::cos(theta) + (1.0 - 2.0 * s.alpha) * std::sin(theta));
    m(1, 2) = 0.25 * eG * cplx(re, im);
    m(2, 1) = std::conj(m(1, 2));
    return DensityMatrix(m);
}

DensityMatrix build_bell_diagonal(double h1, double h2, double h3) {
    if (!std::isfinite(h1) || !std::isfinite(h2) || !std::isfinite(h3))
        throw Error(ErrorKind::InvalidBellDiagonal, "Bell-diagonal coefficients must be finite");
    Matrix4c m = Matrix4c::Identity();
    m += h1 * kron(pauli::x(), pauli::x());
    m += h2 * kron(pauli::y(), pauli::y());
    m += h3 * kron(pauli::z(), pauli::z());
    m *= 0.25;
    ValidationReport r = validate_state(m);
    if (!r.ok()) {
        std::ostringstream os;
        os << "coefficients (" << h1 << ", " << h2 << ", " << h3
           << ") do not give a positive state: min eigenvalue " << r.min_eigenvalue;
        throw Error(ErrorKind::InvalidBellDiagonal, os.str());
    }
    return DensityMatrix(m);
}

} // namespace emitcorr
