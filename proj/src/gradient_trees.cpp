#include "mwl/gradient_trees.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mwl/errors.hpp"

namespace mwl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// position of q in the θ-sorted critical list of its function
int critical_pos(const std::vector<CriticalPoint>& crit, const CriticalPoint& q) {
    for (size_t s = 0; s < crit.size(); ++s)
        if (std::abs(wrap_angle(crit[s].theta - q.theta + kTwoPi / 2) - kTwoPi / 2) <
            1e-9)
            return static_cast<int>(s);
    throw std::invalid_argument("critical tuple entry is not a critical point of its pair");
}

// Open arc (lo, lo+span) on the circle.
struct Arc {
    double lo = 0.0;
    double span = 0.0;
};

// membership with a transversality margin; throws NonGenericError when x
// falls within `margin` of the arc boundary
bool arc_contains(const Arc& a, double x, double margin, const char* what) {
    double d = wrap_angle(x - a.lo);
    double to_boundary =
        std::min({d, kTwoPi - d, std::abs(d - a.span)});
    if (to_boundary < margin) {
        std::ostringstream os;
        os << what << ": configuration within transversality margin " << margin
           << " of an arc boundary; perturb the sequence";
        throw NonGenericError(os.str());
    }
    return d < a.span;
}

// V^+ of a critical point (stable set of the downward flow): for a minimum
// the open arc between the adjacent maxima; for a maximum the point itself
// (handled by pinning, never by arc membership).
Arc stable_arc(const std::vector<CriticalPoint>& crit, const CriticalPoint& q) {
    int pos = critical_pos(crit, q);
    const int n = static_cast<int>(crit.size());
    double lo = crit[(pos - 1 + n) % n].theta;
    double hi = crit[(pos + 1) % n].theta;
    double span = wrap_angle(hi - lo);
    if (span == 0.0) span = kTwoPi;  // two critical points only
    return {lo, span};
}

// V^- of a critical point (unstable set): for a maximum the open arc
// between the adjacent minima.
Arc unstable_arc(const std::vector<CriticalPoint>& crit, const CriticalPoint& q) {
    return stable_arc(crit, q);  // same adjacency structure on the circle
}

// Forward orbit of the upward flow of g from x: open arc from x to the
// next critical point in the flow direction.
Arc forward_orbit(const TrigPoly& g, const std::vector<CriticalPoint>& crit,
                  double x, double margin) {
    double slope = g.d1(x);
    if (std::abs(slope) <= margin)
        throw NonGenericError(
            "gradient tree vertex sits at a critical point of an edge function "
            "within the transversality margin; perturb the sequence");
    int dir = slope > 0 ? +1 : -1;
    // nearest critical angle in direction dir
    double best = kTwoPi;
    for (const auto& c : crit) {
        double d = dir > 0 ? wrap_angle(c.theta - x) : wrap_angle(x - c.theta);
        if (d > 1e-12 && d < best) best = d;
    }
    if (dir > 0) return {x, best};
    return {wrap_angle(x - best), best};
}

}  // namespace

nlohmann::json GradientFlowTree::to_json() const {
    nlohmann::json vs = nlohmann::json::array();
    for (double v : vertex_positions)
        if (!std::isnan(v)) vs.push_back(v);
    return nlohmann::json{{"topology_id", topology_id}, {"vertices", vs}, {"sign", sign}};
}

bool degree_balanced(const std::vector<CriticalPoint>& q_in,
                     const CriticalPoint& q_out) {
    int sum = 0;
    for (const auto& q : q_in) sum += q.index;
    int k = static_cast<int>(q_in.size());
    return sum - k + 2 == q_out.index;
}

std::vector<GradientFlowTree> find_gradient_trees(const MorseSequence& seq,
                                                  const std::vector<CriticalPoint>& q_in,
                                                  const CriticalPoint& q_out,
                                                  const TreeTopology& t,
                                                  double margin) {
    const int k = t.leaf_count;
    if (static_cast<int>(q_in.size()) != k)
        throw std::invalid_argument("find_gradient_trees: need one input per leaf");
    if (seq.k() != k)
        throw std::invalid_argument("find_gradient_trees: sequence length mismatch");
    // validate criticality
    for (int s = 0; s < k; ++s) critical_pos(seq.criticals(s, s + 1), q_in[s]);
    critical_pos(seq.criticals(0, k), q_out);

    if (!degree_balanced(q_in, q_out)) return {};  // moduli dimension != 0

    if (k == 1) {
        // flow lines of f_01 from the minimum q_in[0] to the maximum q_out:
        // one per adjacent arc, signed by the arrival direction
        const auto& crit = seq.criticals(0, 1);
        int pos = critical_pos(crit, q_in[0]);
        const int n = static_cast<int>(crit.size());
        std::vector<GradientFlowTree> out;
        double ccw = crit[(pos + 1) % n].theta;
        double cw = crit[(pos - 1 + n) % n].theta;
        double qt = q_out.theta;
        if (std::abs(wrap_angle(ccw - qt + kTwoPi / 2) - kTwoPi / 2) < 1e-9)
            out.push_back({t.id, {}, +1});
        if (std::abs(wrap_angle(cw - qt + kTwoPi / 2) - kTwoPi / 2) < 1e-9)
            out.push_back({t.id, {}, -1});
        return out;
    }

    // pin vertices: each degree-1 leaf pins its vertex, a degree-0 output
    // pins the root; degree balance makes pins and vertices equinumerous
    std::vector<double> pin(t.nodes.size(), kNaN);
    auto set_pin = [&](int node, double theta) -> bool {
        if (std::isnan(pin[node])) {
            pin[node] = theta;
            return true;
        }
        double d = std::abs(wrap_angle(pin[node] - theta + kTwoPi / 2) - kTwoPi / 2);
        if (d < margin)
            throw NonGenericError(
                "two pins nearly coincide on one tree vertex; perturb the sequence");
        return false;  // inconsistent pins: no tree for this topology
    };
    for (int s = 0; s < k; ++s) {
        if (q_in[s].index != 1) continue;
        int v = t.nodes[t.leaf_nodes[s]].parent;
        if (!set_pin(v, q_in[s].theta)) return {};
    }
    if (q_out.index == 0) {
        if (!set_pin(t.root(), q_out.theta)) return {};
    }
    for (size_t v = 0; v < t.nodes.size(); ++v)
        if (!t.nodes[v].is_leaf() && std::isnan(pin[v]))
            return {};  // pin collision elsewhere left this vertex free

    int sign = 1;
    // leaf membership checks for degree-0 inputs
    for (int s = 0; s < k; ++s) {
        if (q_in[s].index != 0) continue;
        int v = t.nodes[t.leaf_nodes[s]].parent;
        const auto& crit = seq.criticals(s, s + 1);
        if (!arc_contains(stable_arc(crit, q_in[s]), pin[v], margin,
                          "incoming-leaf stable arc"))
            return {};
    }
    // internal edges: target on the forward upward orbit of the source
    for (int e : t.internal_edges()) {
        const TreeNode& nd = t.nodes[e];
        const EdgeLabel l = nd.out_label;
        const TrigPoly& g = seq.diff(l.i, l.j);
        const auto& crit = seq.criticals(l.i, l.j);
        double xs = pin[e];
        double xe = pin[nd.parent];
        Arc orbit = forward_orbit(g, crit, xs, margin);
        if (!arc_contains(orbit, xe, margin, "internal-edge flow order")) return {};
        sign *= (g.d1(xs) > 0) ? +1 : -1;  // flow direction of the edge
    }
    // outgoing edge: root on the unstable set of q_out
    if (q_out.index == 1) {
        const auto& crit = seq.criticals(0, k);
        if (!arc_contains(unstable_arc(crit, q_out), pin[t.root()], margin,
                          "outgoing-edge unstable arc"))
            return {};
    }

    GradientFlowTree tree;
    tree.topology_id = t.id;
    tree.vertex_positions = pin;
    tree.sign = sign;
    return {tree};
}

int morse_product(const MorseSequence& seq, const std::vector<CriticalPoint>& q_in,
                  const CriticalPoint& q_out, double margin) {
    if (!degree_balanced(q_in, q_out)) return 0;
    int total = 0;
    for (const auto& t : enumerate_topologies(static_cast<int>(q_in.size())))
        for (const auto& tree : find_gradient_trees(seq, q_in, q_out, t, margin))
            total += tree.sign;
    return total;
}

double action(const MorseSequence& seq, const std::vector<CriticalPoint>& q_in,
              const CriticalPoint& q_out) {
    const int k = static_cast<int>(q_in.size());
    for (int s = 0; s < k; ++s) critical_pos(seq.criticals(s, s + 1), q_in[s]);
    critical_pos(seq.criticals(0, k), q_out);
    double a = seq.diff(0, k)(q_out.theta);
    for (int s = 0; s < k; ++s) a -= seq.diff(s, s + 1)(q_in[s].theta);
    return a;
}

double tree_length(const MorseSequence& seq, const std::vector<CriticalPoint>& q_in,
                   const CriticalPoint& q_out, const TreeTopology& t,
                   const std::vector<double>& x) {
    const int k = t.leaf_count;
    if (k == 1)  // a single flow line: no vertices, plain Agmon distance
        return agmon_distance(seq.diff(0, 1), seq.criticals(0, 1), q_in[0].theta,
                              q_out.theta);
    double len = 0.0;
    for (int s = 0; s < k; ++s) {
        int v = t.nodes[t.leaf_nodes[s]].parent;
        len += agmon_distance(seq.diff(s, s + 1), seq.criticals(s, s + 1),
                              q_in[s].theta, x[v]);
    }
    for (int e : t.internal_edges()) {
        const EdgeLabel l = t.nodes[e].out_label;
        len += agmon_distance(seq.diff(l.i, l.j), seq.criticals(l.i, l.j), x[e],
                              x[t.nodes[e].parent]);
    }
    len += agmon_distance(seq.diff(0, k), seq.criticals(0, k), q_out.theta,
                          x[t.root()]);
    return len;
}

}  // namespace mwl
