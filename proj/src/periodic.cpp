#include "mwl/periodic.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace mwl {

double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0) t += kTwoPi;
    return t;
}

TrigPoly::TrigPoly(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
    : cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {
    if (cos_.empty()) cos_.assign(1, 0.0);
    if (sin_.size() < cos_.size()) sin_.resize(cos_.size(), 0.0);
    if (cos_.size() < sin_.size()) cos_.resize(sin_.size(), 0.0);
    sin_[0] = 0.0;
}

TrigPoly TrigPoly::harmonic(int m, double amp, double shift) {
    if (m < 0) throw std::invalid_argument("harmonic: m < 0");
    std::vector<double> c(m + 1, 0.0), s(m + 1, 0.0);
    // amp cos(m(θ-shift)) = amp cos(m shift) cos(mθ) + amp sin(m shift) sin(mθ)
    c[m] = amp * std::cos(m * shift);
    if (m > 0) s[m] = amp * std::sin(m * shift);
    return TrigPoly(std::move(c), std::move(s));
}

double TrigPoly::operator()(double theta) const {
    double v = cos_[0];
    for (size_t m = 1; m < cos_.size(); ++m)
        v += cos_[m] * std::cos(m * theta) + sin_[m] * std::sin(m * theta);
    return v;
}

double TrigPoly::d1(double theta) const {
    double v = 0.0;
    for (size_t m = 1; m < cos_.size(); ++m)
        v += m * (-cos_[m] * std::sin(m * theta) + sin_[m] * std::cos(m * theta));
    return v;
}

double TrigPoly::d2(double theta) const {
    double v = 0.0;
    for (size_t m = 1; m < cos_.size(); ++m)
        v += -static_cast<double>(m) * m *
             (cos_[m] * std::cos(m * theta) + sin_[m] * std::sin(m * theta));
    return v;
}

double TrigPoly::d3(double theta) const {
    double v = 0.0;
    for (size_t m = 1; m < cos_.size(); ++m)
        v += static_cast<double>(m) * m * m *
             (cos_[m] * std::sin(m * theta) - sin_[m] * std::cos(m * theta));
    return v;
}

TrigPoly TrigPoly::derivative() const {
    std::vector<double> c(cos_.size(), 0.0), s(cos_.size(), 0.0);
    for (size_t m = 1; m < cos_.size(); ++m) {
        c[m] = m * sin_[m];
        s[m] = -static_cast<double>(m) * cos_[m];
    }
    return TrigPoly(std::move(c), std::move(s));
}

TrigPoly TrigPoly::operator+(const TrigPoly& o) const {
    size_t n = std::max(cos_.size(), o.cos_.size());
    std::vector<double> c(n, 0.0), s(n, 0.0);
    for (size_t m = 0; m < cos_.size(); ++m) { c[m] += cos_[m]; s[m] += sin_[m]; }
    for (size_t m = 0; m < o.cos_.size(); ++m) { c[m] += o.cos_[m]; s[m] += o.sin_[m]; }
    return TrigPoly(std::move(c), std::move(s));
}

TrigPoly TrigPoly::operator-(const TrigPoly& o) const {
    return *this + (o * -1.0);
}

TrigPoly TrigPoly::operator*(double sc) const {
    std::vector<double> c(cos_), s(sin_);
    for (auto& x : c) x *= sc;
    for (auto& x : s) x *= sc;
    return TrigPoly(std::move(c), std::move(s));
}

double TrigPoly::coeff_l1() const {
    double v = 0.0;
    for (double x : cos_) v += std::abs(x);
    for (double x : sin_) v += std::abs(x);
    return v;
}

TrigPoly TrigPoly::from_json(const nlohmann::json& j) {
    std::vector<double> c, s;
    if (j.contains("cos")) c = j.at("cos").get<std::vector<double>>();
    if (j.contains("sin")) {
        s = j.at("sin").get<std::vector<double>>();
        // config convention: "sin" starts at m = 1
        s.insert(s.begin(), 0.0);
    }
    return TrigPoly(std::move(c), std::move(s));
}

nlohmann::json TrigPoly::to_json() const {
    nlohmann::json j;
    j["cos"] = cos_;
    std::vector<double> s(sin_.begin() + 1, sin_.end());
    j["sin"] = s;
    return j;
}

}  // namespace mwl
