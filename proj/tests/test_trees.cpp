#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "mwl/trees.hpp"

using namespace mwl;

namespace {
// Structural fingerprint for distinctness checks.
std::string shape_string(const TreeTopology& t, int v) {
    const TreeNode& nd = t.nodes[v];
    if (nd.is_leaf()) return std::to_string(nd.slot_lo);
    return "(" + shape_string(t, nd.left) + "," + shape_string(t, nd.right) + ")";
}
}  // namespace

TEST_CASE("enumeration counts match Catalan numbers up to k = 8") {
    for (int k = 1; k <= 8; ++k) {
        auto ts = enumerate_topologies(k);
        CHECK(ts.size() == catalan(k - 1));
        std::set<std::string> shapes;
        for (const auto& t : ts) {
            t.check();
            shapes.insert(shape_string(t, t.root()));
        }
        CHECK(shapes.size() == ts.size());  // pairwise distinct
    }
}

TEST_CASE("k = 2 has a unique topology with no internal edges") {
    auto ts = enumerate_topologies(2);
    REQUIRE(ts.size() == 1);
    CHECK(ts[0].internal_edges().empty());
    CHECK(ts[0].nodes[ts[0].root()].out_label == EdgeLabel{0, 2});
}

TEST_CASE("the two 3-trees carry internal edges 02 and 13") {
    auto ts = enumerate_topologies(3);
    REQUIRE(ts.size() == 2);
    std::set<std::pair<int, int>> internal_labels;
    for (const auto& t : ts) {
        auto ie = t.internal_edges();
        REQUIRE(ie.size() == 1);
        const EdgeLabel l = t.nodes[ie[0]].out_label;
        internal_labels.insert({l.i, l.j});
        CHECK(t.nodes[t.root()].out_label == EdgeLabel{0, 3});
    }
    CHECK(internal_labels == std::set<std::pair<int, int>>{{0, 2}, {1, 3}});
}

TEST_CASE("k = 4 has 5 topologies, each with 2 internal edges") {
    auto ts = enumerate_topologies(4);
    REQUIRE(ts.size() == 5);
    for (const auto& t : ts) CHECK(t.internal_edges().size() == 2);
}

TEST_CASE("labeling induction is forced and idempotent") {
    for (int k : {2, 3, 4, 5}) {
        for (const auto& t : enumerate_topologies(k)) {
            // scramble every non-leaf label, then re-derive
            TreeTopology s = t;
            for (auto& nd : s.nodes)
                if (!nd.is_leaf()) nd.out_label = EdgeLabel{0, 0};
            TreeTopology r = label_edges(s);
            for (size_t v = 0; v < t.nodes.size(); ++v)
                CHECK(r.nodes[v].out_label == t.nodes[v].out_label);
            // outgoing leaf label computed by induction equals 0k
            CHECK(r.nodes[r.root()].out_label == EdgeLabel{0, k});
            // idempotent
            TreeTopology r2 = label_edges(r);
            for (size_t v = 0; v < t.nodes.size(); ++v)
                CHECK(r2.nodes[v].out_label == r.nodes[v].out_label);
        }
    }
}

TEST_CASE("label_edges rejects inconsistent leaf order") {
    auto ts = enumerate_topologies(3);
    TreeTopology bad = ts[0];
    // swap two leaf labels
    std::swap(bad.nodes[bad.leaf_nodes[0]].out_label,
              bad.nodes[bad.leaf_nodes[1]].out_label);
    CHECK_THROWS_AS(label_edges(bad), std::invalid_argument);
}

TEST_CASE("flags: 2-tree has 3 flags at its unique vertex") {
    auto t = enumerate_topologies(2)[0];
    auto fl = t.flags();
    REQUIRE(fl.size() == 3);
    for (const auto& f : fl) {
        CHECK(f.vertex_node == t.root());
        CHECK(f.at_root);
    }
}

TEST_CASE("flags: internal edges contribute two flags each") {
    for (const auto& t : enumerate_topologies(4)) {
        auto fl = t.flags();
        int internal_flags = 0;
        auto ie = t.internal_edges();
        for (const auto& f : fl)
            for (int e : ie)
                if (f.edge_node == e) ++internal_flags;
        CHECK(internal_flags == 2 * static_cast<int>(ie.size()));
        // total: k leaf flags + 1 outgoing + 2 per internal edge
        CHECK(fl.size() == 4 + 1 + 2 * ie.size());
    }
}

TEST_CASE("invalid arguments are rejected") {
    CHECK_THROWS_AS(enumerate_topologies(0), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_topologies(-3), std::invalid_argument);
}

TEST_CASE("metric tree validation") {
    auto t = enumerate_topologies(4)[0];
    MetricTree mt{t, {1.0, 2.5}};
    mt.check();
    MetricTree bad{t, {1.0, -1.0}};
    CHECK_THROWS_AS(bad.check(), std::invalid_argument);
    MetricTree wrong_size{t, {1.0}};
    CHECK_THROWS_AS(wrong_size.check(), std::invalid_argument);
}

TEST_CASE("JSON serialization carries k, edges and labels") {
    auto t = enumerate_topologies(3)[0];
    auto j = t.to_json();
    CHECK(j["k"] == 3);
    CHECK(j["vertices"] == 2);
    CHECK(j["edges"].size() == 5);  // 3 leaves + 1 internal + 1 outgoing
    CHECK(j["leaf_order"].size() == 3);
}
