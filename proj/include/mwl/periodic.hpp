#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace mwl {

// Real trigonometric polynomial on the circle,
//   f(θ) = c0 + Σ_{m=1}^{D} ( a_m cos(mθ) + b_m sin(mθ) ),
// period 2π, with analytic derivatives of all orders.
class TrigPoly {
public:
    TrigPoly() : cos_(1, 0.0), sin_(1, 0.0) {}
    // cos_coeffs[m] multiplies cos(mθ) (m = 0 is the constant term);
    // sin_coeffs[m] multiplies sin(mθ) (entry 0 is ignored).
    TrigPoly(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

    static TrigPoly zero() { return TrigPoly(); }
    // amp * cos(m(θ - shift))
    static TrigPoly harmonic(int m, double amp, double shift = 0.0);

    double operator()(double theta) const;
    double d1(double theta) const;
    double d2(double theta) const;
    double d3(double theta) const;
    TrigPoly derivative() const;

    TrigPoly operator+(const TrigPoly& o) const;
    TrigPoly operator-(const TrigPoly& o) const;
    TrigPoly operator*(double s) const;

    int degree() const { return static_cast<int>(cos_.size()) - 1; }
    // l1 norm of the coefficients: an upper bound for |f|.
    double coeff_l1() const;

    static TrigPoly from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

private:
    std::vector<double> cos_;
    std::vector<double> sin_;
};

// Wrap an angle into [0, 2π).
double wrap_angle(double theta);

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace mwl
