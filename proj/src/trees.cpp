#include "mwl/trees.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace mwl {

std::uint64_t catalan(int n) {
    if (n < 0) throw std::invalid_argument("catalan: n < 0");
    std::uint64_t c = 1;
    for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
    return c;
}

std::vector<int> TreeTopology::internal_edges() const {
    std::vector<int> out;
    for (int v = 1; v < static_cast<int>(nodes.size()); ++v)
        if (!nodes[v].is_leaf()) out.push_back(v);
    return out;
}

std::vector<Flag> TreeTopology::flags() const {
    std::vector<Flag> out;
    for (int v = 0; v < static_cast<int>(nodes.size()); ++v) {
        const TreeNode& nd = nodes[v];
        if (nd.is_leaf()) {
            // leaf edge has one adjacent vertex: its parent (none for k=1)
            if (nd.parent >= 0) out.push_back({v, nd.parent, nd.parent == 0});
        } else {
            // edge out of an internal node: adjacent below ...
            out.push_back({v, v, v == 0});
            // ... and, for internal edges, at the parent vertex too
            if (nd.parent >= 0) out.push_back({v, nd.parent, nd.parent == 0});
        }
    }
    return out;
}

void TreeTopology::check() const {
    const int k = leaf_count;
    if (k < 1) throw std::invalid_argument("TreeTopology: k < 1");
    if (static_cast<int>(leaf_nodes.size()) != k)
        throw std::invalid_argument("TreeTopology: wrong leaf count");
    if (static_cast<int>(nodes.size()) != 2 * k - 1)
        throw std::invalid_argument("TreeTopology: node count must be 2k-1");
    for (int s = 0; s < k; ++s) {
        const TreeNode& lf = nodes[leaf_nodes[s]];
        if (!lf.is_leaf() || lf.slot_lo != s || lf.slot_hi != s)
            throw std::invalid_argument("TreeTopology: leaves out of planar order");
        if (!(lf.out_label == EdgeLabel{s, s + 1}))
            throw std::invalid_argument("TreeTopology: leaf label mismatch");
    }
    for (const TreeNode& nd : nodes) {
        if (nd.is_leaf()) continue;
        const TreeNode& l = nodes[nd.left];
        const TreeNode& r = nodes[nd.right];
        // trivalence: two incoming edges, one outgoing; shared middle index
        if (l.out_label.j != r.out_label.i)
            throw std::invalid_argument("TreeTopology: vertex rule violated");
        if (!(nd.out_label == EdgeLabel{l.out_label.i, r.out_label.j}))
            throw std::invalid_argument("TreeTopology: outgoing label mismatch");
    }
    if (!(nodes[0].out_label == EdgeLabel{0, k}))
        throw std::invalid_argument("TreeTopology: outgoing edge must be 0k");
}

nlohmann::json TreeTopology::to_json() const {
    nlohmann::json edges = nlohmann::json::array();
    // vertex numbering: internal nodes in node-id order, root first
    std::vector<int> vertex_of(nodes.size(), -1);
    int nv = 0;
    for (int v = 0; v < static_cast<int>(nodes.size()); ++v)
        if (!nodes[v].is_leaf()) vertex_of[v] = nv++;
    for (int v = 0; v < static_cast<int>(nodes.size()); ++v) {
        const TreeNode& nd = nodes[v];
        nlohmann::json e;
        e["label"] = {nd.out_label.i, nd.out_label.j};
        if (nd.is_leaf()) {
            e["src"] = -1;  // incoming semi-infinite edge
            e["dst"] = nd.parent >= 0 ? vertex_of[nd.parent] : -1;
        } else {
            e["src"] = vertex_of[v];
            e["dst"] = nd.parent >= 0 ? vertex_of[nd.parent] : -1;  // root: outgoing
        }
        edges.push_back(e);
    }
    nlohmann::json leaf_order = nlohmann::json::array();
    for (int s = 0; s < leaf_count; ++s)
        leaf_order.push_back({s, s + 1});
    return nlohmann::json{{"k", leaf_count},
                          {"id", id},
                          {"vertices", nv},
                          {"edges", edges},
                          {"leaf_order", leaf_order}};
}

// Enumeration: recursive over the split point of the root vertex, split
// position ascending, left subtree varying slowest. This is lexicographic
// on the bracketing and therefore deterministic.
static void enumerate_range(int lo, int hi, const TreeTopology& base,
                            const std::function<void(TreeTopology, int)>& cont) {
    if (lo == hi) {
        TreeTopology t = base;
        int id = static_cast<int>(t.nodes.size());
        t.nodes.push_back(TreeNode{-1, -1, lo, hi, -1, EdgeLabel{lo, hi + 1}});
        cont(std::move(t), id);
        return;
    }
    for (int m = lo; m < hi; ++m) {
        enumerate_range(lo, m, base, [&](TreeTopology t1, int left_id) {
            enumerate_range(m + 1, hi, t1, [&](TreeTopology t2, int right_id) {
                int id = static_cast<int>(t2.nodes.size());
                t2.nodes.push_back(TreeNode{left_id, right_id, lo, hi, -1,
                                            EdgeLabel{lo, hi + 1}});
                t2.nodes[left_id].parent = id;
                t2.nodes[right_id].parent = id;
                cont(std::move(t2), id);
            });
        });
    }
}

std::vector<TreeTopology> enumerate_topologies(int k) {
    if (k < 1) throw std::invalid_argument("enumerate_topologies: k must be >= 1");
    std::vector<TreeTopology> out;
    TreeTopology base;
    base.leaf_count = k;
    enumerate_range(0, k - 1, base, [&](TreeTopology t, int root_id) {
        // move the root node to index 0 by rotating ids
        // (simpler: remap so that nodes[0] is the root)
        int n = static_cast<int>(t.nodes.size());
        std::vector<int> perm(n);
        // root -> 0, others shift up preserving relative order
        int next = 1;
        for (int v = 0; v < n; ++v) perm[v] = (v == root_id) ? 0 : next++;
        TreeTopology r;
        r.leaf_count = k;
        r.id = static_cast<int>(out.size());
        r.nodes.resize(n);
        for (int v = 0; v < n; ++v) {
            TreeNode nd = t.nodes[v];
            if (nd.left >= 0) nd.left = perm[nd.left];
            if (nd.right >= 0) nd.right = perm[nd.right];
            if (nd.parent >= 0) nd.parent = perm[nd.parent];
            r.nodes[perm[v]] = nd;
        }
        r.leaf_nodes.assign(k, -1);
        for (int v = 0; v < n; ++v)
            if (r.nodes[v].is_leaf()) r.leaf_nodes[r.nodes[v].slot_lo] = v;
        r.check();
        out.push_back(std::move(r));
    });
    return out;
}

TreeTopology label_edges(TreeTopology t) {
    const int k = t.leaf_count;
    // leaves must carry consecutive labels in planar order
    for (int s = 0; s < k; ++s) {
        const TreeNode& lf = t.nodes[t.leaf_nodes[s]];
        if (!(lf.out_label == EdgeLabel{s, s + 1}))
            throw std::invalid_argument("label_edges: inconsistent leaf order");
    }
    // induction along the directed tree: children before parents
    std::function<void(int)> relabel = [&](int v) {
        TreeNode& nd = t.nodes[v];
        if (nd.is_leaf()) return;
        relabel(nd.left);
        relabel(nd.right);
        const EdgeLabel a = t.nodes[nd.left].out_label;
        const EdgeLabel b = t.nodes[nd.right].out_label;
        if (a.j != b.i)
            throw std::invalid_argument("label_edges: vertex rule has no solution");
        nd.out_label = EdgeLabel{a.i, b.j};
    };
    relabel(t.root());
    t.check();
    return t;
}

void MetricTree::check() const {
    topology.check();
    if (lengths.size() != topology.internal_edges().size())
        throw std::invalid_argument("MetricTree: one length per internal edge");
    for (double l : lengths)
        if (!(l > 0.0)) throw std::invalid_argument("MetricTree: lengths must be positive");
}

}  // namespace mwl
