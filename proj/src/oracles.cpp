#include "emitcorr/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace emitcorr::oracle {

namespace {

constexpr double pi = std::numbers::pi;

Matrix2c partial_trace_b(const Matrix4c& m) {
    Matrix2c out = Matrix2c::Zero();
    for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap)
            for (int b = 0; b < 2; ++b) out(a, ap) += m(2 * a + b, 2 * ap + b);
    return out;
}

Matrix4c projector_on_b(const Eigen::Vector2cd& v) {
    Matrix2c p = v * v.adjoint();
    Matrix4c out = Matrix4c::Zero();
    for (int a = 0; a < 2; ++a) out.block<2, 2>(2 * a, 2 * a) = p;
    return out;
}

double entropy2(const Matrix2c& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix2c> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (int i = 0; i < 2; ++i) {
        double l = es.eigenvalues()(i);
        if (l > 1e-300) s -= l * std::log(l) / std::log(2.0);
    }
    return s;
}

struct Point {
    double x, y, f;
};

// Plain Nelder-Mead in two dimensions.
Point nelder_mead(const Matrix4c& rho, Point start, double scale) {
    auto f = [&](double x, double y) { return conditional_entropy(rho, x, y); };
    std::array<Point, 3> s{start, Point{start.x + scale, start.y, 0.0}, Point{start.x, start.y + scale, 0.0}};
    s[1].f = f(s[1].x, s[1].y);
    s[2].f = f(s[2].x, s[2].y);
    for (int it = 0; it < 4000; ++it) {
        std::sort(s.begin(), s.end(), [](const Point& a, const Point& b) { return a.f < b.f; });
        double spread = std::max(std::abs(s[1].x - s[0].x) + std::abs(s[1].y - s[0].y),
                                 std::abs(s[2].x - s[0].x) + std::abs(s[2].y - s[0].y));
        if (spread < 1e-11) break;
        double cx = 0.5 * (s[0].x + s[1].x);
        double cy = 0.5 * (s[0].y + s[1].y);
        Point r{2 * cx - s[2].x, 2 * cy - s[2].y, 0.0};
        r.f = f(r.x, r.y);
        if (r.f < s[0].f) {
            Point e{3 * cx - 2 * s[2].x, 3 * cy - 2 * s[2].y, 0.0};
            e.f = f(e.x, e.y);
            s[2] = e.f < r.f ? e : r;
        } else if (r.f < s[1].f) {
            s[2] = r;
        } else {
            Point c{0.5 * (cx + s[2].x), 0.5 * (cy + s[2].y), 0.0};
            c.f = f(c.x, c.y);
            if (c.f < s[2].f) {
                s[2] = c;
            } else {
                for (int k = 1; k < 3; ++k) {
                    s[k].x = 0.5 * (s[k].x + s[0].x);
                    s[k].y = 0.5 * (s[k].y + s[0].y);
                    s[k].f = f(s[k].x, s[k].y);
                }
            }
        }
    }
    return *std::min_element(s.begin(), s.end(), [](const Point& a, const Point& b) { return a.f < b.f; });
}

} // namespace

double entropy(const Eigen::MatrixXcd& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()));
    double s = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        double l = es.eigenvalues()(i);
        if (l > 1e-300) s -= l * std::log(l) / std::log(2.0);
    }
    return s;
}

double conditional_entropy(const Matrix4c& rho, double theta, double phi) {
    const cplx e = std::exp(cplx(0.0, phi));
    const std::array<Eigen::Vector2cd, 2> basis{
        Eigen::Vector2cd(std::cos(theta), e * std::sin(theta)),
        Eigen::Vector2cd(std::conj(e) * std::sin(theta), -std::cos(theta))};
    double s = 0.0;
    for (const auto& v : basis) {
        Matrix4c P = projector_on_b(v);
        Matrix4c post = P * rho * P;
        double p = post.trace().real();
        if (p <= 1e-14) continue;
        s += p * entropy2(partial_trace_b(post) / p);
    }
    return s;
}

GridMinimum min_conditional_entropy(const Matrix4c& rho, int n) {
    Point best{0.0, 0.0, conditional_entropy(rho, 0.0, 0.0)};
    for (int i = 0; i < n; ++i) {
        double th = (pi / 2) * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            double ph = 2 * pi * j / n;
            double v = conditional_entropy(rho, th, ph);
            if (v < best.f) best = {th, ph, v};
        }
    }
    Point polished = nelder_mead(rho, best, 0.5 * pi / n);
    if (polished.f < best.f) best = polished;
    return {best.f, best.x, best.y};
}

double classical_correlations(const Matrix4c& rho, int n) {
    return entropy(partial_trace_b(rho)) - min_conditional_entropy(rho, n).entropy;
}

double concurrence_hermitian(const Matrix4c& rho) {
    Matrix4c yy = Matrix4c::Zero();
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    Matrix4c tilde = yy * rho.conjugate() * yy;
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(0.5 * (rho + rho.adjoint()));
    Eigen::Vector4d w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Matrix4c root = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
    Matrix4c r = root * tilde * root;
    Eigen::SelfAdjointEigenSolver<Matrix4c> es2(0.5 * (r + r.adjoint()));
    std::array<double, 4> l{};
    for (int i = 0; i < 4; ++i) l[i] = std::sqrt(std::max(es2.eigenvalues()(i), 0.0));
    std::sort(l.begin(), l.end(), std::greater<>());
    return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

Matrix4c random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix4c g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = cplx(n(rng), n(rng));
    Matrix4c m = g * g.adjoint();
    return m / m.trace().real();
}

Vector4c random_pure(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vector4c v;
    for (int i = 0; i < 4; ++i) v(i) = cplx(n(rng), n(rng));
    return v / v.norm();
}

Matrix4c random_unitary(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix4c g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = cplx(n(rng), n(rng));
    Eigen::HouseholderQR<Matrix4c> qr(g);
    return qr.householderQ() * Matrix4c::Identity();
}

double fitted_decay_rate(const std::vector<double>& t, const std::vector<double>& y) {
    double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(y[i] > 0.0)) continue;
        double ly = std::log(y[i]);
        n += 1;
        st += t[i];
        sy += ly;
        stt += t[i] * t[i];
        sty += t[i] * ly;
    }
    double slope = (n * sty - st * sy) / (n * stt - st * st);
    return -slope;
}

} // namespace emitcorr::oracle
