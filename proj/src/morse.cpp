#include "mwl/morse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mwl/errors.hpp"

namespace mwl {

namespace {

// Bisection + Newton polish for a bracketed root of g.
double refine_root(const TrigPoly& f, double a, double b) {
    double fa = f.d1(a);
    for (int it = 0; it < 64; ++it) {
        double m = 0.5 * (a + b);
        double fm = f.d1(m);
        if ((fa <= 0) == (fm <= 0)) { a = m; fa = fm; }
        else b = m;
    }
    double x = 0.5 * (a + b);
    for (int it = 0; it < 4; ++it) {
        double g = f.d1(x), dg = f.d2(x);
        if (std::abs(dg) < 1e-14) break;
        x -= g / dg;
    }
    return wrap_angle(x);
}

}  // namespace

std::vector<CriticalPoint> critical_points(const TrigPoly& f, double tol) {
    const int deg = std::max(1, f.degree());
    const int n = std::max(2048, 64 * deg);
    const double h = kTwoPi / n;

    double max_d1 = 0.0;
    std::vector<double> d1(n);
    for (int m = 0; m < n; ++m) {
        d1[m] = f.d1(m * h);
        max_d1 = std::max(max_d1, std::abs(d1[m]));
    }
    if (max_d1 < 1e-12)
        throw NotMorseError("critical_points: f' vanishes identically (constant f)");
    // exact zeros at nodes: assign them to the right-hand interval only
    for (int m = 0; m < n; ++m)
        if (d1[m] == 0.0) d1[m] = 1e-300;

    std::vector<CriticalPoint> out;
    for (int m = 0; m < n; ++m) {
        double va = d1[m], vb = d1[(m + 1) % n];
        if ((va > 0) != (vb > 0)) {
            double theta = refine_root(f, m * h, (m + 1) * h);
            double hess = f.d2(theta);
            if (std::abs(hess) <= tol) {
                std::ostringstream os;
                os << "critical_points: degenerate critical point at theta=" << theta
                   << " (|f''|=" << std::abs(hess) << " <= tol=" << tol << ")";
                throw NotMorseError(os.str());
            }
            out.push_back({theta, hess < 0 ? 1 : 0, hess});
        }
    }
    // near-tangential zeros of f' without a sign change are degenerate too
    for (int m = 0; m < n; ++m) {
        if (std::abs(d1[m]) < tol * 1e-2 && std::abs(f.d2(m * h)) <= tol) {
            bool near_known = false;
            for (const auto& c : out)
                if (std::abs(wrap_angle(m * h - c.theta + kTwoPi / 2) - kTwoPi / 2) < 4 * h)
                    near_known = true;
            if (!near_known)
                throw NotMorseError("critical_points: tangential zero of f' (not Morse)");
        }
    }
    std::sort(out.begin(), out.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) { return a.theta < b.theta; });
    // drop duplicates produced by refinement wrapping across 2π
    for (size_t s = 0; s + 1 < out.size();) {
        if (out[s + 1].theta - out[s].theta < h / 4) out.erase(out.begin() + s + 1);
        else ++s;
    }
    if (out.size() > 1 && out.front().theta + kTwoPi - out.back().theta < h / 4)
        out.pop_back();
    // structural sanity: even count, alternating indices
    if (out.empty() || out.size() % 2 != 0)
        throw NotMorseError("critical_points: odd critical point count");
    for (size_t s = 0; s < out.size(); ++s)
        if (out[s].index == out[(s + 1) % out.size()].index)
            throw NotMorseError("critical_points: indices fail to alternate");
    return out;
}

double agmon_arc_ccw(const TrigPoly& f, const std::vector<CriticalPoint>& crit,
                     double x, double y) {
    x = wrap_angle(x);
    y = wrap_angle(y);
    double span = y - x;
    if (span < 0) span += kTwoPi;
    // breakpoints: x, critical angles in (x, x+span), y — f is monotone on
    // each piece, so the integral of |f'| is |Δf| there
    std::vector<double> brk;
    brk.push_back(0.0);
    for (const auto& c : crit) {
        double d = c.theta - x;
        if (d < 0) d += kTwoPi;
        if (d > 1e-14 && d < span - 1e-14) brk.push_back(d);
    }
    brk.push_back(span);
    std::sort(brk.begin(), brk.end());
    double len = 0.0;
    for (size_t t = 0; t + 1 < brk.size(); ++t)
        len += std::abs(f(x + brk[t + 1]) - f(x + brk[t]));
    return len;
}

double agmon_distance(const TrigPoly& f, const std::vector<CriticalPoint>& crit,
                      double x, double y) {
    return std::min(agmon_arc_ccw(f, crit, x, y), agmon_arc_ccw(f, crit, y, x));
}

double agmon_distance(const TrigPoly& f, double x, double y) {
    return agmon_distance(f, critical_points(f), x, y);
}

Eigen::MatrixXi morse_differential(const std::vector<CriticalPoint>& crit,
                                   int orientation) {
    std::vector<int> mins, maxs;  // positions in the sorted list
    for (size_t s = 0; s < crit.size(); ++s)
        (crit[s].index == 0 ? mins : maxs).push_back(static_cast<int>(s));
    Eigen::MatrixXi delta = Eigen::MatrixXi::Zero(static_cast<int>(maxs.size()),
                                                  static_cast<int>(mins.size()));
    const int n = static_cast<int>(crit.size());
    auto max_row = [&](int pos) {
        for (size_t r = 0; r < maxs.size(); ++r)
            if (maxs[r] == pos) return static_cast<int>(r);
        return -1;
    };
    for (size_t c = 0; c < mins.size(); ++c) {
        int p = mins[c];
        // upward flow line along the ccw arc arrives at the next critical
        // point (a maximum) moving counterclockwise: + orientation
        int q_ccw = (p + 1) % n;
        // the cw arc arrives moving clockwise: - orientation
        int q_cw = (p - 1 + n) % n;
        delta(max_row(q_ccw), static_cast<int>(c)) += orientation;
        delta(max_row(q_cw), static_cast<int>(c)) -= orientation;
    }
    return delta;
}

Eigen::MatrixXi morse_differential(const TrigPoly& f, double tol) {
    return morse_differential(critical_points(f, tol));
}

MorseSequence::MorseSequence(std::vector<TrigPoly> fs, double morse_tol,
                             double disjoint_tol)
    : fs_(std::move(fs)), morse_tol_(morse_tol) {
    if (fs_.size() < 2)
        throw std::invalid_argument("MorseSequence: need at least two functions");
    const int kk = k();
    for (int i = 0; i < kk; ++i)
        for (int j = i + 1; j <= kk; ++j) {
            TrigPoly d = fs_[j] - fs_[i];
            try {
                crits_[{i, j}] = critical_points(d, morse_tol_);
            } catch (const NotMorseError& e) {
                std::ostringstream os;
                os << "MorseSequence: f_" << i << j << " is not Morse: " << e.what();
                throw NotMorseError(os.str());
            }
            diffs_[{i, j}] = std::move(d);
        }
    // critical sets of distinct pairs must stay apart (genericity guard)
    for (auto it = crits_.begin(); it != crits_.end(); ++it)
        for (auto jt = std::next(it); jt != crits_.end(); ++jt)
            for (const auto& a : it->second)
                for (const auto& b : jt->second) {
                    double d = std::abs(wrap_angle(a.theta - b.theta + kTwoPi / 2) -
                                        kTwoPi / 2);
                    if (d < disjoint_tol) {
                        std::ostringstream os;
                        os << "MorseSequence: critical points of f_" << it->first.first
                           << it->first.second << " and f_" << jt->first.first
                           << jt->first.second << " collide near theta=" << a.theta
                           << "; perturb the sequence";
                        throw NonGenericError(os.str());
                    }
                }
}

const TrigPoly& MorseSequence::diff(int i, int j) const {
    auto it = diffs_.find({i, j});
    if (it == diffs_.end()) throw std::out_of_range("MorseSequence::diff: bad pair");
    return it->second;
}

const std::vector<CriticalPoint>& MorseSequence::criticals(int i, int j) const {
    auto it = crits_.find({i, j});
    if (it == crits_.end()) throw std::out_of_range("MorseSequence::criticals: bad pair");
    return it->second;
}

CriticalPoint MorseSequence::critical_by_rank(int i, int j, int index, int rank) const {
    int r = 0;
    for (const auto& c : criticals(i, j)) {
        if (c.index != index) continue;
        if (r == rank) return c;
        ++r;
    }
    throw std::out_of_range("critical_by_rank: no such critical point");
}

CriticalPoint MorseSequence::critical_by_angle(int i, int j, double center,
                                               double width) const {
    const CriticalPoint* best = nullptr;
    double best_d = width;
    for (const auto& c : criticals(i, j)) {
        double d = std::abs(wrap_angle(c.theta - center + kTwoPi / 2) - kTwoPi / 2);
        if (d < best_d) { best_d = d; best = &c; }
    }
    if (!best) throw std::out_of_range("critical_by_angle: no critical point in window");
    return *best;
}

}  // namespace mwl
