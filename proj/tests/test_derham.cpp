#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "mwl/derham.hpp"
#include "mwl/errors.hpp"

using namespace mwl;

namespace {
const double kPi = kTwoPi / 2;

Eigen::VectorXd sample_fn(const CircleGrid& g, double (*fn)(double)) {
    Eigen::VectorXd v(g.n);
    for (int m = 0; m < g.n; ++m) v[m] = fn(g.theta(m));
    return v;
}
}  // namespace

TEST_CASE("grid constraints") {
    CHECK_THROWS_AS(CircleGrid(15), std::invalid_argument);
    CHECK_THROWS_AS(CircleGrid(64), std::invalid_argument);
    CircleGrid g(65);
    CHECK(g.h == doctest::Approx(kTwoPi / 65));
}

TEST_CASE("spectral derivative is exact on resolvable trig polynomials") {
    CircleGrid g(65);
    Eigen::MatrixXd D = spectral_derivative(g);
    // constant -> 0
    CHECK((D * Eigen::VectorXd::Ones(g.n)).lpNorm<Eigen::Infinity>() < 1e-12);
    // cos θ -> -sin θ
    Eigen::VectorXd c = sample_fn(g, [](double t) { return std::cos(t); });
    Eigen::VectorXd s = sample_fn(g, [](double t) { return std::sin(t); });
    CHECK((D * c + s).lpNorm<Eigen::Infinity>() < 1e-12);
    // cos mθ -> -m sin mθ, sin mθ -> m cos mθ for m < n/2
    for (int m : {5, 17, 31}) {
        TrigPoly f = TrigPoly::harmonic(m, 1.0);
        TrigPoly fd = f.derivative();
        CHECK((D * g.sample(f) - g.sample(fd)).lpNorm<Eigen::Infinity>() < 1e-9 * m);
    }
    // antisymmetry
    CHECK((D + D.transpose()).norm() < 1e-12);
}

TEST_CASE("barycentric interpolation reproduces trig polynomials") {
    CircleGrid g(65);
    TrigPoly f = TrigPoly::harmonic(3, 1.0, 0.4) + TrigPoly::harmonic(7, 0.5);
    Eigen::VectorXd u = g.sample(f);
    for (double t : {0.123, 2.7, 4.0, 6.1}) {
        CHECK(g.interpolate(u, t) == doctest::Approx(f(t)).epsilon(1e-11));
    }
    CHECK(g.interpolate(u, g.theta(5)) == doctest::Approx(u[5]));
}

TEST_CASE("wedge: unit, pointwise product, top-degree kill") {
    CircleGrid g(33);
    Cochain one{0, Eigen::VectorXd::Ones(g.n)};
    Cochain b{1, sample_fn(g, [](double t) { return std::sin(t); })};
    Cochain w = wedge(one, b);
    CHECK(w.degree == 1);
    CHECK((w.v - b.v).norm() == 0.0);

    Cochain a{0, sample_fn(g, [](double t) { return std::cos(t); })};
    Cochain ab = wedge(a, b);
    for (int m = 0; m < g.n; ++m)
        CHECK(ab.v[m] == doctest::Approx(std::cos(g.theta(m)) * std::sin(g.theta(m))));

    Cochain dd = wedge(b, b);
    CHECK(dd.degree == 2);
    CHECK(dd.v.isZero());

    // graded commutativity is exact: a∧b = b∧a for |a||b| = 0
    Cochain ba = wedge(b, a);
    CHECK((ab.v - ba.v).norm() == 0.0);
}

TEST_CASE("witten_d: kernel element, f=0 reduction, action on constants") {
    CircleGrid g(129);
    TrigPoly f = TrigPoly::harmonic(1, 1.0);
    const double hbar = 0.3;  // e^{±f/h} resolvable at n=128
    WittenData w(g, f, hbar);
    LinearMap dw = witten_d(w);

    // e^{-f/h} spans the kernel by construction
    Eigen::VectorXd kernel(g.n);
    for (int m = 0; m < g.n; ++m) kernel[m] = std::exp(-f(g.theta(m)) / hbar);
    CHECK((dw.m * kernel).lpNorm<Eigen::Infinity>() / kernel.lpNorm<Eigen::Infinity>() < 1e-12);

    // hbar = 1, f = 0 reduces to the plain derivative
    WittenData w0(g, TrigPoly::zero(), 1.0);
    CHECK((witten_d(w0).m - spectral_derivative(g)).norm() < 1e-14);

    // f = cos θ, input ≡ 1: result is f' dθ = -sin θ dθ
    Cochain one{0, Eigen::VectorXd::Ones(g.n)};
    Cochain r = dw.apply(one);
    CHECK(r.degree == 1);
    Eigen::VectorXd msin = sample_fn(g, [](double t) { return -std::sin(t); });
    CHECK((r.v - msin).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("conjugation identity e^{-f/h}(hd)e^{f/h}") {
    CircleGrid g(257);
    TrigPoly f = TrigPoly::harmonic(1, 1.0) + TrigPoly::harmonic(2, 0.4, 1.0);
    const double hbar = 0.4;
    WittenData w(g, f, hbar);
    Eigen::MatrixXd D = spectral_derivative(g);
    Eigen::VectorXd ef(g.n), emf(g.n);
    for (int m = 0; m < g.n; ++m) {
        ef[m] = std::exp(f(g.theta(m)) / hbar);
        emf[m] = 1.0 / ef[m];
    }
    Eigen::MatrixXd conj = emf.asDiagonal() * (hbar * D) * ef.asDiagonal();
    // compare on smooth inputs
    TrigPoly u = TrigPoly::harmonic(3, 1.0, 0.2);
    Eigen::VectorXd uu = g.sample(u);
    double rel = (witten_d(w).m * uu - conj * uu).norm() / (witten_d(w).m * uu).norm();
    CHECK(rel < 1e-8);
}

TEST_CASE("witten_adjoint is the L2 adjoint and kills e^{f/h} dθ") {
    CircleGrid g(129);
    TrigPoly f = TrigPoly::harmonic(1, 1.0);
    const double hbar = 0.3;
    WittenData w(g, f, hbar);
    LinearMap dw = witten_d(w), dws = witten_adjoint(w);
    std::mt19937 rng(3);
    std::normal_distribution<double> N(0, 1);
    for (int t = 0; t < 100; ++t) {
        Eigen::VectorXd u(g.n), v(g.n);
        for (int m = 0; m < g.n; ++m) { u[m] = N(rng); v[m] = N(rng); }
        double lhs = g.inner(dw.m * u, v);
        double rhs = g.inner(u, dws.m * v);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
    // f = 0: adjoint of h d is -h d
    WittenData w0(g, TrigPoly::zero(), 0.5);
    CHECK((witten_adjoint(w0).m + 0.5 * spectral_derivative(g)).norm() < 1e-14);
    // cokernel: e^{f/h} dθ
    Eigen::VectorXd cok(g.n);
    for (int m = 0; m < g.n; ++m) cok[m] = std::exp(f(g.theta(m)) / hbar);
    CHECK((dws.m * cok).lpNorm<Eigen::Infinity>() / cok.lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("witten laplacian: symmetry, f=0 spectrum, dual assembly route") {
    CircleGrid g(65);
    const double hbar = 0.2;

    // f = 0: eigenvalues h² m², doubly degenerate, plus the top-mode zero
    WittenData w0(g, TrigPoly::zero(), hbar);
    LinearMap L0 = witten_laplacian(w0, 0);
    CHECK((L0.m - L0.m.transpose()).norm() / L0.m.norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L0.m);
    Eigen::VectorXd ev = es.eigenvalues();
    std::vector<double> expect;
    expect.push_back(0.0);
    for (int m = 1; expect.size() < static_cast<size_t>(g.n); ++m) {
        expect.push_back(hbar * hbar * m * m);
        if (expect.size() < static_cast<size_t>(g.n)) expect.push_back(hbar * hbar * m * m);
    }
    std::sort(expect.begin(), expect.end());
    for (int s = 0; s < g.n / 2; ++s)
        CHECK(ev[s] == doctest::Approx(expect[s]).epsilon(1e-9).scale(1.0));

    // dual route agreement on resolvable inputs
    TrigPoly f = TrigPoly::harmonic(1, 1.0);
    WittenData w(g, f, hbar);
    for (int degree : {0, 1}) {
        LinearMap A = witten_laplacian(w, degree);
        LinearMap B = witten_laplacian_formula(w, degree);
        for (int mm : {0, 1, 2, 5}) {
            TrigPoly u = TrigPoly::harmonic(mm, 1.0, 0.3);
            Eigen::VectorXd uu = g.sample(u);
            double scale = (A.m * uu).norm() + 1.0;
            CHECK((A.m * uu - B.m * uu).norm() / scale < 1e-10);
        }
    }
}

TEST_CASE("Leibniz rule holds to spectral accuracy") {
    CircleGrid g(257);
    const double hbar = 0.15;
    TrigPoly f01 = TrigPoly::harmonic(1, 1.0);
    TrigPoly f12 = TrigPoly::harmonic(1, 0.8, 2.0) - TrigPoly::harmonic(1, 1.0);
    TrigPoly f02 = f01 + f12;
    WittenData w01(g, f01, hbar), w12(g, f12, hbar), w02(g, f02, hbar);

    // deg-0 a in Hom(1,2), deg-0 b in Hom(0,1):
    // d_02(a∧b) = (d_12 a)∧b + a∧(d_01 b)
    Cochain a{0, g.sample(TrigPoly::harmonic(2, 1.0, 0.5))};
    Cochain b{0, g.sample(TrigPoly::harmonic(3, 0.7, 1.1))};
    Cochain lhs = witten_d(w02).apply(wedge(a, b));
    Cochain r1 = wedge(witten_d(w12).apply(a), b);
    Cochain r2 = wedge(a, witten_d(w01).apply(b));
    double rel = (lhs.v - r1.v - r2.v).norm() / lhs.v.norm();
    CHECK(rel < 1e-11);
}
