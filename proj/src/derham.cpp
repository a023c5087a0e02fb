#include "mwl/derham.hpp"

#include <cmath>
#include <stdexcept>

#include "mwl/errors.hpp"

namespace mwl {

CircleGrid::CircleGrid(int n_) : n(n_), h(kTwoPi / n_) {
    if (n < 17 || n % 2 == 0)
        throw std::invalid_argument("CircleGrid: n must be odd and >= 17");
}

Eigen::VectorXd CircleGrid::sample(const TrigPoly& f) const {
    Eigen::VectorXd v(n);
    for (int m = 0; m < n; ++m) v[m] = f(theta(m));
    return v;
}

double CircleGrid::inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    return h * u.dot(v);
}

double CircleGrid::interpolate(const Eigen::VectorXd& u, double theta_) const {
    // barycentric trigonometric interpolation, odd-n (csc) weights
    double num = 0.0, den = 0.0;
    for (int m = 0; m < n; ++m) {
        double d = 0.5 * (theta_ - theta(m));
        double s = std::sin(d);
        if (std::abs(s) < 1e-14) return u[m];
        double w = (m % 2 ? -1.0 : 1.0) / s;
        num += w * u[m];
        den += w;
    }
    return num / den;
}

Cochain LinearMap::apply(const Cochain& c) const {
    if (c.degree != dom_deg)
        throw std::invalid_argument("LinearMap::apply: degree mismatch");
    return Cochain{cod_deg, m * c.v};
}

Eigen::MatrixXd spectral_derivative(const CircleGrid& g) {
    const int n = g.n;
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            if (j == l) continue;
            int d = j - l;
            double s = (d % 2 == 0) ? 1.0 : -1.0;
            D(j, l) = 0.5 * s / std::sin(0.5 * d * g.h);
        }
    return D;
}

Cochain star(const Cochain& c) {
    if (c.degree == 0) return Cochain{1, c.v};
    if (c.degree == 1) return Cochain{0, c.v};
    throw std::invalid_argument("star: unsupported degree");
}

Cochain wedge(const Cochain& a, const Cochain& b) {
    if (a.degree + b.degree > 1) {
        // top degree on the circle: flagged-trivial zero of degree 2
        return Cochain{2, Eigen::VectorXd::Zero(a.v.size())};
    }
    return Cochain{a.degree + b.degree, a.v.cwiseProduct(b.v)};
}

WittenData::WittenData(const CircleGrid& g, const TrigPoly& fij, double hbar_)
    : grid(g), hbar(hbar_) {
    if (!(hbar > 0.0) || hbar > 1.0)
        throw std::invalid_argument("WittenData: hbar must lie in (0, 1]");
    f = g.sample(fij);
    df.resize(g.n);
    d2f.resize(g.n);
    for (int m = 0; m < g.n; ++m) {
        df[m] = fij.d1(g.theta(m));
        d2f[m] = fij.d2(g.theta(m));
    }
}

LinearMap witten_d(const WittenData& w) {
    Eigen::MatrixXd D = spectral_derivative(w.grid);
    Eigen::MatrixXd M = w.hbar * D;
    M += w.df.asDiagonal();
    return LinearMap{0, 1, std::move(M)};
}

LinearMap witten_adjoint(const WittenData& w) {
    // both inner products carry the same h-weight, so the adjoint is the
    // plain matrix transpose
    return LinearMap{1, 0, witten_d(w).m.transpose()};
}

LinearMap witten_laplacian(const WittenData& w, int degree) {
    Eigen::MatrixXd A = witten_d(w).m;
    Eigen::MatrixXd L;
    if (degree == 0) L = A.transpose() * A;          // d* d on functions
    else if (degree == 1) L = A * A.transpose();      // d d* on 1-forms
    else throw std::invalid_argument("witten_laplacian: degree must be 0 or 1");
    double asym = (L - L.transpose()).norm();
    double scale = std::max(1.0, L.norm());
    if (asym / scale > 1e-10)
        throw AssemblyError("witten_laplacian: assembled operator not symmetric");
    L = 0.5 * (L + L.transpose()).eval();
    return LinearMap{degree, degree, std::move(L)};
}

LinearMap witten_laplacian_formula(const WittenData& w, int degree) {
    if (degree != 0 && degree != 1)
        throw std::invalid_argument("witten_laplacian_formula: degree must be 0 or 1");
    Eigen::MatrixXd D = spectral_derivative(w.grid);
    Eigen::MatrixXd L = -(w.hbar * w.hbar) * (D * D);
    // h² Δ + h M_f + |∇f|² with M_f = ∓ f'' on degrees 0/1
    double sgn = (degree == 0) ? -1.0 : 1.0;
    L += (sgn * w.hbar * w.d2f).asDiagonal();
    L += w.df.cwiseProduct(w.df).asDiagonal();
    return LinearMap{degree, degree, std::move(L)};
}

}  // namespace mwl
