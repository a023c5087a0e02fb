#pragma once

#include <Eigen/Core>

#include "mwl/periodic.hpp"

namespace mwl {

// Uniform periodic grid on the circle: nodes θ_m = m·h, h = 2π/n.
// Both 0- and 1-cochains are collocated at the nodes. n must be odd: on
// even grids the collocated spectral derivative kills the Nyquist mode,
// and conjugation by the checkerboard vector then produces a mirror copy
// of the Witten complex whose spurious zero modes corrupt the small
// subspace in every degree. Odd grids have no such sector.
struct CircleGrid {
    int n = 0;
    double h = 0.0;
    explicit CircleGrid(int n_);
    double theta(int m) const { return m * h; }
    Eigen::VectorXd sample(const TrigPoly& f) const;
    // discrete L² pairing (flat metric): h * Σ u_m v_m, both degrees
    double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
    double norm_sq(const Eigen::VectorXd& u) const { return inner(u, u); }
    // trigonometric (barycentric) interpolation of nodal values at θ
    double interpolate(const Eigen::VectorXd& u, double theta) const;
};

// Discrete differential form: degree 0 or 1 (degree 2 appears only as the
// flagged-trivial result of a top-degree wedge).
struct Cochain {
    int degree = 0;
    Eigen::VectorXd v;
};

// Dense operator between cochain spaces.
struct LinearMap {
    int dom_deg = 0;
    int cod_deg = 0;
    Eigen::MatrixXd m;
    Cochain apply(const Cochain& c) const;
};

// Spectral differentiation matrix (exact on trig polynomials of degree
// <= (n-1)/2); antisymmetric.
Eigen::MatrixXd spectral_derivative(const CircleGrid& g);

// Hodge star on the flat circle: swaps the degree, keeps coefficients.
Cochain star(const Cochain& c);

// Pointwise wedge. deg0∧deg0 and deg0∧deg1 multiply values; deg1∧deg1 is
// the zero cochain of degree 2 (top degree on the circle).
Cochain wedge(const Cochain& a, const Cochain& b);

// Witten data for one function difference at one value of hbar.
struct WittenData {
    CircleGrid grid;
    double hbar = 0.0;
    Eigen::VectorXd f, df, d2f;  // samples of f_ij and derivatives
    WittenData(const CircleGrid& g, const TrigPoly& fij, double hbar_);
};

// d_{f,h} = h·d + df∧ : deg 0 -> 1.
LinearMap witten_d(const WittenData& w);
// adjoint with respect to the discrete L² pairings: deg 1 -> 0.
LinearMap witten_adjoint(const WittenData& w);
// Δ = d d* + d* d in the given degree, assembled by composition;
// symmetrized after an asymmetry check (throws AssemblyError beyond 1e-10).
LinearMap witten_laplacian(const WittenData& w, int degree);
// Independent assembly route: h²(-D²) ∓ h·f'' + (f')², minus sign in
// degree 0, plus in degree 1. Agrees with the composition route on
// resolvable cochains (cross-check in tests).
LinearMap witten_laplacian_formula(const WittenData& w, int degree);

}  // namespace mwl
