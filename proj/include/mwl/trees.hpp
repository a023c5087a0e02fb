#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace mwl {

// Edge label (i,j), 0 <= i < j <= k. Edge ij carries the function
// difference f_ij = f_j - f_i.
struct EdgeLabel {
    int i = 0;
    int j = 0;
    bool operator==(const EdgeLabel&) const = default;
};

// Node of a rooted planar trivalent tree, stored as a full binary tree
// over the leaf slots 0..k-1 (slot s is the incoming edge labelled
// (s, s+1)). A node spans the consecutive slots [slot_lo, slot_hi] and its
// outgoing edge is labelled (slot_lo, slot_hi + 1) by the vertex rule:
// incoming ij and jl meet to produce il.
struct TreeNode {
    int left = -1;   // child node id, -1 for a leaf
    int right = -1;
    int slot_lo = 0;
    int slot_hi = 0;
    int parent = -1;  // -1 for the root
    EdgeLabel out_label;
    bool is_leaf() const { return left < 0; }
};

// A flag is a pair (edge, adjacent vertex). Edges are identified with the
// node they emanate from; vertices are the internal (trivalent) nodes.
struct Flag {
    int edge_node = -1;    // node whose outgoing edge this is
    int vertex_node = -1;  // adjacent internal node
    bool at_root = false;  // vertex is the root vertex
};

// Planar trivalent directed tree with k incoming leaves, one outgoing
// edge, and the induced (i,j) edge labelling. Immutable value type.
struct TreeTopology {
    int leaf_count = 0;            // k >= 1
    int id = -1;                   // position in canonical enumeration
    std::vector<TreeNode> nodes;   // nodes[0] is the root node
    std::vector<int> leaf_nodes;   // node id of leaf slot s, in planar order

    int root() const { return 0; }
    // Internal edges are the outgoing edges of non-root internal nodes;
    // there are k-2 of them for k >= 2.
    std::vector<int> internal_edges() const;
    std::vector<Flag> flags() const;
    // Validate the structural invariants (trivalence, labels, planar order).
    void check() const;
    nlohmann::json to_json() const;
};

// All planar trivalent k-leafed topologies in canonical (lexicographic
// bracketing) order. Count is Catalan(k-1). Throws std::invalid_argument
// for k < 1.
std::vector<TreeTopology> enumerate_topologies(int k);

// Recompute edge labels from the leaf labels by the vertex rule. The
// leaves must already carry consecutive labels 01..(k-1)k in planar order;
// otherwise throws std::invalid_argument. Idempotent.
TreeTopology label_edges(TreeTopology t);

// Metric tree: a topology plus a positive length per internal edge.
// Unused by the counting pipeline; kept for completeness of the type layer.
struct MetricTree {
    TreeTopology topology;
    std::vector<double> lengths;  // parallel to topology.internal_edges()
    void check() const;
};

std::uint64_t catalan(int n);

}  // namespace mwl
