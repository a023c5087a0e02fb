#pragma once

// Brute-force gradient-tree oracle used by tests and by the acceptance
// suite. Works entirely from dense samples of the functions: basins and
// monotone segments are read off sampled sign patterns, never from the
// production critical-point / arc machinery it is meant to check.

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "mwl/morse.hpp"
#include "mwl/periodic.hpp"
#include "mwl/trees.hpp"

namespace mwl::oracle {

struct SampledFn {
    int n = 0;
    double h = 0.0;
    std::vector<double> f;
    std::vector<int> descend_basin;  // node id of the minimum the node sinks to
    std::vector<int> ascend_basin;   // node id of the maximum the node climbs to
    std::vector<int> segment;        // monotone segment id
};

inline SampledFn sample_fn(const TrigPoly& fn, int n) {
    SampledFn s;
    s.n = n;
    s.h = kTwoPi / n;
    s.f.resize(n);
    for (int i = 0; i < n; ++i) s.f[i] = fn(i * s.h);
    auto at = [&](int i) { return s.f[((i % n) + n) % n]; };
    // local extrema of the sample sequence
    std::vector<int> is_min(n, 0), is_max(n, 0);
    for (int i = 0; i < n; ++i) {
        if (at(i) <= at(i - 1) && at(i) < at(i + 1)) is_min[i] = 1;
        if (at(i) >= at(i - 1) && at(i) > at(i + 1)) is_max[i] = 1;
    }
    s.descend_basin.assign(n, -1);
    s.ascend_basin.assign(n, -1);
    s.segment.assign(n, -1);
    // walk each monotone run between consecutive extrema
    int seg = 0;
    int start = -1;
    for (int i = 0; i < n; ++i)
        if (is_min[i] || is_max[i]) { start = i; break; }
    int i = start;
    do {
        int j = i + 1;
        while (!is_min[((j % n) + n) % n] && !is_max[((j % n) + n) % n]) ++j;
        int lo_node, hi_node;
        if (at(i) < at(j)) { lo_node = i; hi_node = j; }
        else { lo_node = j; hi_node = i; }
        for (int m = i; m <= j; ++m) {
            int mm = ((m % n) + n) % n;
            s.descend_basin[mm] = ((lo_node % n) + n) % n;
            s.ascend_basin[mm] = ((hi_node % n) + n) % n;
            if (m < j) s.segment[mm] = seg;
        }
        ++seg;
        i = j;
    } while (((i % n) + n) % n != start);
    return s;
}

inline int node_of(const SampledFn& s, double theta) {
    int i = static_cast<int>(std::lround(wrap_angle(theta) / s.h));
    return ((i % s.n) + s.n) % s.n;
}

// x lies in the stable set V^+ of q (a minimum): both descend to the same
// sampled minimum.
inline bool in_stable(const SampledFn& s, double x, double q) {
    return s.descend_basin[node_of(s, x)] == s.descend_basin[node_of(s, q)];
}

// x lies in the unstable set V^- of q (a maximum): the downward flow from
// q sweeps exactly the nodes that ascend to q.
inline bool in_unstable(const SampledFn& s, double x, double q) {
    return s.ascend_basin[node_of(s, x)] == s.ascend_basin[node_of(s, q)];
}

// y on the forward (upward) orbit from x: same monotone segment, higher f.
inline bool on_forward_orbit(const SampledFn& s, double x, double y) {
    int ix = node_of(s, x), iy = node_of(s, y);
    return s.segment[ix] >= 0 && s.segment[ix] == s.segment[iy] &&
           s.f[iy] > s.f[ix];
}

// proximity for point conditions, a couple of cells wide
inline bool near_point(const SampledFn& s, double x, double q) {
    double d = std::abs(wrap_angle(x - q + kTwoPi / 2) - kTwoPi / 2);
    return d <= 2.5 * s.h;
}

// ---- tree counting ------------------------------------------------------

// k = 1: unsigned count of flow lines from the minimum p to the maximum q
// (each adjacent ascending run ending at q contributes one).
inline int count_flow_lines(const TrigPoly& f, double p, double q, int n = 200000) {
    SampledFn s = sample_fn(f, n);
    int ip = node_of(s, p);
    int count = 0;
    if (near_point(s, s.ascend_basin[(ip + 1) % n] * s.h, q)) ++count;
    if (near_point(s, s.ascend_basin[(ip - 1 + n) % n] * s.h, q)) ++count;
    return count;
}

struct OracleTree {
    std::vector<double> vertices;  // representative positions (refined)
};

// k = 2: scan the circle for the unique Y-vertex; conditions follow the
// moduli definition directly. Returns one entry per connected component.
inline std::vector<OracleTree> count_trees_k2(const MorseSequence& seq,
                                              const std::vector<CriticalPoint>& q_in,
                                              const CriticalPoint& q_out,
                                              int n = 200000) {
    SampledFn s01 = sample_fn(seq.diff(0, 1), n);
    SampledFn s12 = sample_fn(seq.diff(1, 2), n);
    SampledFn s02 = sample_fn(seq.diff(0, 2), n);
    auto leaf_ok = [&](const SampledFn& s, const CriticalPoint& q, double v) {
        return q.index == 0 ? in_stable(s, v, q.theta) : near_point(s, v, q.theta);
    };
    auto root_ok = [&](double v) {
        return q_out.index == 0 ? near_point(s02, v, q_out.theta)
                                : in_unstable(s02, v, q_out.theta);
    };
    std::vector<char> pass(n, 0);
    for (int i = 0; i < n; ++i) {
        double v = i * s01.h;
        pass[i] = leaf_ok(s01, q_in[0], v) && leaf_ok(s12, q_in[1], v) && root_ok(v);
    }
    std::vector<OracleTree> out;
    for (int i = 0; i < n; ++i) {
        if (!pass[i] || pass[(i - 1 + n) % n]) continue;
        int j = i, len = 0;
        while (pass[j] && len < n) { j = (j + 1) % n; ++len; }
        out.push_back({{wrap_angle((i + 0.5 * (len - 1)) * s01.h)}});
    }
    return out;
}

// k = 3: scan vertex pairs on a coarse grid, flood-fill the passing mask,
// then refine each component on a local fine grid.
inline std::vector<OracleTree> count_trees_k3(const MorseSequence& seq,
                                              const std::vector<CriticalPoint>& q_in,
                                              const CriticalPoint& q_out,
                                              const TreeTopology& t,
                                              int coarse = 2400) {
    // vertex v carries two leaves, the root carries the third
    int v_node = -1;
    for (size_t m = 0; m < t.nodes.size(); ++m)
        if (!t.nodes[m].is_leaf() && static_cast<int>(m) != t.root()) v_node = static_cast<int>(m);
    std::vector<int> v_slots, r_slots;
    for (int s = 0; s < 3; ++s) {
        int parent = t.nodes[t.leaf_nodes[s]].parent;
        (parent == v_node ? v_slots : r_slots).push_back(s);
    }
    EdgeLabel el = t.nodes[v_node].out_label;

    auto make = [&](int n) {
        std::map<std::pair<int, int>, SampledFn> fns;
        for (int s : v_slots) fns[{s, s + 1}] = sample_fn(seq.diff(s, s + 1), n);
        for (int s : r_slots) fns[{s, s + 1}] = sample_fn(seq.diff(s, s + 1), n);
        fns[{el.i, el.j}] = sample_fn(seq.diff(el.i, el.j), n);
        fns[{0, 3}] = sample_fn(seq.diff(0, 3), n);
        return fns;
    };
    auto passes = [&](std::map<std::pair<int, int>, SampledFn>& fns, double v,
                      double r) {
        auto leaf_ok = [&](int slot, double x) {
            const SampledFn& s = fns[{slot, slot + 1}];
            const CriticalPoint& q = q_in[slot];
            return q.index == 0 ? in_stable(s, x, q.theta) : near_point(s, x, q.theta);
        };
        for (int s : v_slots)
            if (!leaf_ok(s, v)) return false;
        for (int s : r_slots)
            if (!leaf_ok(s, r)) return false;
        if (!on_forward_orbit(fns[{el.i, el.j}], v, r)) return false;
        const SampledFn& s0k = fns[{0, 3}];
        return q_out.index == 0 ? near_point(s0k, r, q_out.theta)
                                : in_unstable(s0k, r, q_out.theta);
    };

    auto fns = make(coarse);
    std::map<std::pair<int, int>, SampledFn> fine;  // built on first refinement
    double h = kTwoPi / coarse;
    std::vector<char> mask(coarse * coarse, 0);
    for (int a = 0; a < coarse; ++a)
        for (int b = 0; b < coarse; ++b)
            mask[a * coarse + b] = passes(fns, a * h, b * h);
    // flood fill on the torus
    std::vector<OracleTree> out;
    std::vector<char> seen(coarse * coarse, 0);
    for (int a = 0; a < coarse; ++a)
        for (int b = 0; b < coarse; ++b) {
            int id = a * coarse + b;
            if (!mask[id] || seen[id]) continue;
            // BFS component, track centroid cell
            std::vector<std::pair<int, int>> stack = {{a, b}};
            seen[id] = 1;
            double ca = 0, cb = 0;
            int cnt = 0;
            double a0 = a * h, b0 = b * h;
            while (!stack.empty()) {
                auto [x, y] = stack.back();
                stack.pop_back();
                // accumulate relative to the first cell to handle wrap
                ca += wrap_angle(x * h - a0 + kTwoPi / 2) - kTwoPi / 2;
                cb += wrap_angle(y * h - b0 + kTwoPi / 2) - kTwoPi / 2;
                ++cnt;
                const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    int nx = (x + dx[d] + coarse) % coarse;
                    int ny = (y + dy[d] + coarse) % coarse;
                    int nid = nx * coarse + ny;
                    if (mask[nid] && !seen[nid]) { seen[nid] = 1; stack.push_back({nx, ny}); }
                }
            }
            double rv = wrap_angle(a0 + ca / cnt), rr = wrap_angle(b0 + cb / cnt);
            // refine: centroid of the passing set on a fine local box (in
            // rigid configurations both coordinates are point-pinned, so
            // the passing set is a small symmetric window around the pins)
            if (fine.empty()) fine = make(200000);
            const double fh = kTwoPi / 200000;
            const double win = 2.2 * h;
            double sv = 0, sr = 0;
            int c2 = 0;
            for (double dv = -win; dv <= win; dv += fh)
                for (double dr = -win; dr <= win; dr += fh)
                    if (passes(fine, rv + dv, rr + dr)) { sv += dv; sr += dr; ++c2; }
            if (c2 > 0) { rv = wrap_angle(rv + sv / c2); rr = wrap_angle(rr + sr / c2); }
            out.push_back({{rv, rr}});
        }
    return out;
}

}  // namespace mwl::oracle
