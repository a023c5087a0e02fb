#pragma once

#include <map>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "mwl/periodic.hpp"

namespace mwl {

struct CriticalPoint {
    double theta = 0.0;    // location in [0, 2π)
    int index = 0;         // 0 = minimum, 1 = maximum (dim of unstable set)
    double hessian = 0.0;  // f''(theta), nonzero
};

// All critical points of f, sorted by θ, alternating index around the
// circle. Throws NotMorseError when some root of f' has |f''| <= tol, or
// when f' has a near-tangential zero, or when f is constant.
std::vector<CriticalPoint> critical_points(const TrigPoly& f, double tol = 1e-6);

// Agmon length of the counterclockwise arc from x to y: ∫|f'|dθ, evaluated
// exactly as Σ|Δf| over the monotone segments cut by critical points.
double agmon_arc_ccw(const TrigPoly& f, const std::vector<CriticalPoint>& crit,
                     double x, double y);

// Agmon distance ρ_f(x, y): minimum of the two arc lengths. Symmetric,
// satisfies ρ(x,y) >= |f(x) - f(y)|.
double agmon_distance(const TrigPoly& f, const std::vector<CriticalPoint>& crit,
                      double x, double y);
double agmon_distance(const TrigPoly& f, double x, double y);

// Morse differential: entry (row q, col p) is the signed count of upward
// flow lines from the minimum p to the maximum q (each adjacent arc
// contributes ±1). Rows run over index-1 criticals, columns over index-0,
// both in θ-sorted order. `orientation` (+1 counterclockwise) fixes the
// global sign convention.
Eigen::MatrixXi morse_differential(const std::vector<CriticalPoint>& crit,
                                   int orientation = +1);
Eigen::MatrixXi morse_differential(const TrigPoly& f, double tol = 1e-6);

// A sequence f_0..f_k whose pairwise differences f_ij = f_j - f_i are all
// Morse, with critical sets cached. Construction validates the Morse
// property for every i < j and (for k >= 2) that critical sets of
// different pairs stay disjoint.
class MorseSequence {
public:
    explicit MorseSequence(std::vector<TrigPoly> fs, double morse_tol = 1e-6,
                           double disjoint_tol = 1e-4);

    int k() const { return static_cast<int>(fs_.size()) - 1; }
    const TrigPoly& f(int i) const { return fs_.at(i); }
    const TrigPoly& diff(int i, int j) const;
    const std::vector<CriticalPoint>& criticals(int i, int j) const;
    double morse_tol() const { return morse_tol_; }

    // Critical point of f_ij with the given index, r-th in θ-sorted order
    // among that index class. Throws std::out_of_range when absent.
    CriticalPoint critical_by_rank(int i, int j, int index, int rank) const;
    // Critical point of f_ij inside the angular window (center ± width).
    CriticalPoint critical_by_angle(int i, int j, double center, double width) const;

private:
    std::vector<TrigPoly> fs_;
    double morse_tol_;
    std::map<std::pair<int, int>, TrigPoly> diffs_;
    std::map<std::pair<int, int>, std::vector<CriticalPoint>> crits_;
};

}  // namespace mwl
