#include "emitcorr/correlations.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>

#include "emitcorr/parallel.hpp"

namespace emitcorr {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double min_branch_probability = 1e-14;
constexpr double concurrence_imag_limit = 1e-6;

// Swaps the two qubits so that the measured one is always the right factor.
Matrix4c swap_qubits(const Matrix4c& m) {
    static constexpr std::array<int, 4> perm{0, 2, 1, 3};
    Matrix4c out;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out(r, c) = m(perm[r], perm[c]);
    return out;
}

Matrix4c measured_on_right(const DensityMatrix& rho, Subsystem measured) {
    return measured == Subsystem::B ? rho.matrix() : swap_qubits(rho.matrix());
}

// Unnormalized conditional state of the left qubit: <v|_right m |v>_right.
Matrix2c project_right(const Matrix4c& m, const Eigen::Vector2cd& v) {
    Matrix2c out;
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
            cplx acc = 0.0;
            for (int j = 0; j < 2; ++j)
                for (int l = 0; l < 2; ++l) acc += std::conj(v(j)) * m(2 * i + j, 2 * k + l) * v(l);
            out(i, k) = acc;
        }
    return out;
}

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// p S(M / p) for an unnormalized 2x2 branch, without validation.
double weighted_branch_entropy(const Matrix2c& unnormalized) {
    double p = unnormalized.trace().real();
    if (p <= min_branch_probability) return 0.0;
    Eigen::Vector2d ev = hermitian_eigenvalues(unnormalized) / p;
    return -p * (xlog2x(std::max(ev(0), 0.0)) + xlog2x(std::max(ev(1), 0.0)));
}

double conditional_entropy_right(const Matrix4c& m, double theta, double phi) {
    double c = std::cos(theta);
    double s = std::sin(theta);
    cplx e = std::polar(1.0, phi);
    Eigen::Vector2cd a(c, e * s);
    Eigen::Vector2cd b(std::conj(e) * s, -c);
    return weighted_branch_entropy(project_right(m, a)) + weighted_branch_entropy(project_right(m, b));
}

struct Candidate {
    double value;
    double theta;
    double phi;
};

// Compass search with step halving, starting from a grid cell.
Candidate polish(const Matrix4c& m, Candidate start, double step_theta, double step_phi,
                 const OptimizerOptions& opts) {
    Candidate best = start;
    int iterations = 0;
    while ((step_theta >= opts.min_step || step_phi >= opts.min_step) &&
           iterations++ < opts.max_iterations) {
        const std::array<std::array<double, 2>, 4> moves{{
            {step_theta, 0.0}, {-step_theta, 0.0}, {0.0, step_phi}, {0.0, -step_phi}}};
        bool moved = false;
        for (const auto& mv : moves) {
            double th = best.theta + mv[0];
            double ph = best.phi + mv[1];
            double v = conditional_entropy_right(m, th, ph);
            if (v < best.value) {
                best = {v, th, ph};
                moved = true;
                break;
            }
        }
        if (!moved) {
            step_theta *= 0.5;
            step_phi *= 0.5;
        }
    }
    return best;
}

ConditionalMinimum minimize_right(const Matrix4c& m, const OptimizerOptions& opts) {
    if (opts.grid < 2) throw Error(ErrorKind::InvalidArgument, "optimizer grid must be >= 2");
    const int n = opts.grid;
    const double d_theta = (pi / 2) / (n - 1);
    const double d_phi = 2 * pi / n;

    const int keep = std::max(1, opts.polish_starts);
    std::vector<Candidate> top;
    top.reserve(keep + 1);
    for (int i = 0; i < n; ++i) {
        double th = i * d_theta;
        for (int j = 0; j < n; ++j) {
            double ph = j * d_phi;
            Candidate c{conditional_entropy_right(m, th, ph), th, ph};
            // Strict comparison keeps the first-found cell on ties.
            auto pos = std::find_if(top.begin(), top.end(),
                                    [&](const Candidate& t) { return c.value < t.value; });
            if (pos != top.end() || static_cast<int>(top.size()) < keep) {
                top.insert(pos, c);
                if (static_cast<int>(top.size()) > keep) top.pop_back();
            }
        }
    }

    Candidate best = top.front();
    for (const Candidate& start : top) {
        Candidate c = polish(m, start, d_theta, d_phi, opts);
        if (c.value < best.value) best = c;
    }
    ConditionalMinimum out;
    out.entropy = std::max(best.value, 0.0);
    out.basis = MeasurementBasis{best.theta, best.phi}.canonical();
    return out;
}

void require_x_structure(const DensityMatrix& rho) {
    if (!has_emitter_x_structure(rho))
        throw Error(ErrorKind::NonXStructure,
                    "state lacks the single-excitation X structure (zero entries violated)");
}

} // namespace

Eigen::Vector2cd MeasurementBasis::a() const {
    return {std::cos(theta_m), std::polar(std::sin(theta_m), phi_m)};
}

Eigen::Vector2cd MeasurementBasis::b() const {
    return {std::polar(std::sin(theta_m), -phi_m), -std::cos(theta_m)};
}

MeasurementBasis MeasurementBasis::canonical() const {
    double th = std::fmod(theta_m, pi);
    if (th < 0) th += pi;
    double ph = phi_m;
    if (th > pi / 2) {
        th = pi - th;
        ph += pi;
    }
    ph = std::fmod(ph, 2 * pi);
    if (ph < 0) ph += 2 * pi;
    return {th, ph};
}

ConditionalState post_measurement_state(const DensityMatrix& rho, const MeasurementBasis& basis,
                                        Outcome outcome, Subsystem measured) {
    Matrix4c m = measured_on_right(rho, measured);
    Matrix2c branch = project_right(m, outcome == Outcome::a ? basis.a() : basis.b());
    double p = branch.trace().real();
    if (p <= min_branch_probability) {
        std::ostringstream os;
        os << "measurement outcome has probability " << p << "; conditional state undefined";
        throw Error(ErrorKind::ConditionalUndefined, os.str());
    }
    Subsystem other = measured == Subsystem::B ? Subsystem::A : Subsystem::B;
    return {ReducedState(branch / p, other), p};
}

double conditional_entropy(const DensityMatrix& rho, const MeasurementBasis& basis,
                           Subsystem measured) {
    double s = 0.0;
    for (Outcome o : {Outcome::a, Outcome::b}) {
        try {
            ConditionalState cs = post_measurement_state(rho, basis, o, measured);
            s += cs.probability * von_neumann_entropy(cs.state);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ConditionalUndefined) throw;
        }
    }
    return s;
}

ConditionalMinimum minimize_conditional_entropy(const DensityMatrix& rho, Subsystem measured,
                                                const OptimizerOptions& opts) {
    return minimize_right(measured_on_right(rho, measured), opts);
}

double mutual_information(const DensityMatrix& rho) {
    return von_neumann_entropy(partial_trace(rho, Subsystem::A)) +
           von_neumann_entropy(partial_trace(rho, Subsystem::B)) - von_neumann_entropy(rho);
}

ClassicalCorrelations classical_correlations(const DensityMatrix& rho, Subsystem measured,
                                             const OptimizerOptions& opts) {
    Subsystem other = measured == Subsystem::B ? Subsystem::A : Subsystem::B;
    ConditionalMinimum m = minimize_conditional_entropy(rho, measured, opts);
    return {von_neumann_entropy(partial_trace(rho, other)) - m.entropy, m.basis};
}

double quantum_discord(const DensityMatrix& rho, Subsystem measured, const OptimizerOptions& opts) {
    ConditionalMinimum m = minimize_conditional_entropy(rho, measured, opts);
    return von_neumann_entropy(partial_trace(rho, measured)) - von_neumann_entropy(rho) + m.entropy;
}

double concurrence(const DensityMatrix& rho) {
    const Matrix4c yy = kron(pauli::y(), pauli::y());
    const Matrix4c flipped = yy * rho.matrix().conjugate() * yy;
    Eigen::ComplexEigenSolver<Matrix4c> es(rho.matrix() * flipped, false);
    if (es.info() != Eigen::Success)
        throw Error(ErrorKind::NumericalFailure, "eigen-solver failed on rho * rho_tilde");
    for (int i = 0; i < 4; ++i) {
        cplx mu = es.eigenvalues()(i);
        if (std::abs(mu.imag()) > concurrence_imag_limit) {
            std::ostringstream os;
            os << "rho * rho_tilde eigenvalue " << mu.real() << " + " << mu.imag()
               << "i is not real";
            throw Error(ErrorKind::NumericalFailure, os.str());
        }
    }
    // The square roots of that spectrum are the singular values of
    // W^T (sy x sy) W with rho = W W^dagger; taking them directly avoids the
    // square root of rounding noise on rank-deficient states.
    Eigen::SelfAdjointEigenSolver<Matrix4c> eig(rho.matrix());
    Matrix4c w = eig.eigenvectors();
    for (int i = 0; i < 4; ++i) w.col(i) *= std::sqrt(std::max(eig.eigenvalues()(i), 0.0));
    Eigen::JacobiSVD<Matrix4c> svd(Matrix4c(w.transpose() * yy * w));
    const Eigen::Vector4d lambda = svd.singularValues();
    double c = lambda(0) - lambda(1) - lambda(2) - lambda(3);
    return std::clamp(c, 0.0, 1.0);
}

double eof_from_concurrence(double c) {
    if (!(c >= 0.0 && c <= 1.0 + 1e-12))
        throw Error(ErrorKind::InvalidArgument, "concurrence outside [0, 1]");
    c = std::min(c, 1.0);
    if (c == 0.0) return 0.0;
    return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

double eof(const DensityMatrix& rho) { return eof_from_concurrence(concurrence(rho)); }

bool has_emitter_x_structure(const DensityMatrix& rho, double tol) {
    const Matrix4c& m = rho.matrix();
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            bool allowed = (r == c && r != 3) || (r == 1 && c == 2) || (r == 2 && c == 1);
            if (!allowed && std::abs(m(r, c)) > tol) return false;
        }
    return true;
}

XStateBranches xstate_conditional_entropy_branches(const DensityMatrix& rho) {
    require_x_structure(rho);
    const Matrix4c& m = rho.matrix();
    double ground = std::max(m(0, 0).real(), 0.0);
    double excited_a = std::max(m(2, 2).real(), 0.0);  // rho_{10,10}
    double total = ground + excited_a;

    XStateBranches out{};
    if (total > 0.0) {
        out.computational = -xlog2x(ground) - xlog2x(excited_a) + total * std::log2(total);
        out.computational = std::max(out.computational, 0.0);
    }
    double one_minus = 1.0 - 2.0 * m(2, 2).real();
    double xi = std::min(1.0, std::sqrt(one_minus * one_minus + 4.0 * std::norm(m(1, 2))));
    out.diagonal = -xlog2x(0.5 * (1.0 - xi)) - xlog2x(0.5 * (1.0 + xi));
    return out;
}

double xstate_concurrence(const DensityMatrix& rho) {
    require_x_structure(rho);
    return std::min(1.0, 2.0 * std::abs(rho(1, 2)));
}

double entropy_bound_check(const DensityMatrix& rho, Subsystem measured, const OptimizerOptions& opts) {
    Subsystem other = measured == Subsystem::B ? Subsystem::A : Subsystem::B;
    ConditionalMinimum m = minimize_conditional_entropy(rho, measured, opts);
    return von_neumann_entropy(partial_trace(rho, measured)) + 2.0 * m.entropy -
           von_neumann_entropy(partial_trace(rho, other)) - von_neumann_entropy(rho);
}

CorrelationRecord correlation_record(const DensityMatrix& rho, double t, Subsystem measured,
                                     const OptimizerOptions& opts) {
    Subsystem other = measured == Subsystem::B ? Subsystem::A : Subsystem::B;
    double s_measured = von_neumann_entropy(partial_trace(rho, measured));
    double s_other = von_neumann_entropy(partial_trace(rho, other));
    double s_joint = von_neumann_entropy(rho);
    ConditionalMinimum m = minimize_conditional_entropy(rho, measured, opts);

    CorrelationRecord r;
    r.t = t;
    r.MI = s_measured + s_other - s_joint;
    r.CC = s_other - m.entropy;
    r.QD = s_measured - s_joint + m.entropy;
    r.C = concurrence(rho);
    r.EoF = eof_from_concurrence(r.C);
    r.argmax_basis = m.basis;
    return r;
}

std::vector<CorrelationRecord> correlation_records(const EvolutionResult& evolution, unsigned threads,
                                                   Subsystem measured) {
    std::vector<CorrelationRecord> out(evolution.states.size());
    parallel_for(out.size(), threads, [&](std::size_t i) {
        out[i] = correlation_record(evolution.states[i], evolution.times[i], measured);
    });
    return out;
}

} // namespace emitcorr
