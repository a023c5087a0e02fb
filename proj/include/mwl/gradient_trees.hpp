#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mwl/morse.hpp"
#include "mwl/trees.hpp"

namespace mwl {

// A rigid gradient flow tree: vertex positions indexed like the internal
// nodes of its topology, with the counting sign. For k = 1 a "tree" is a
// single flow line and has no vertices.
struct GradientFlowTree {
    int topology_id = -1;
    std::vector<double> vertex_positions;  // per topology node id; leaves NaN
    int sign = 0;
    nlohmann::json to_json() const;
};

// Degree condition: Σ deg(q_{i,i+1}) - k + 2 == deg(q_{0k}).
bool degree_balanced(const std::vector<CriticalPoint>& q_in,
                     const CriticalPoint& q_out);

// All rigid gradient flow trees of the given topology for the critical
// tuple (q_in in leaf-slot order, q_out). On the circle every rigid
// configuration has all vertices pinned by the degree-1 inputs and the
// output, so the search reduces to exact arc-membership and flow-order
// checks; `margin` is the transversality margin below which the
// configuration is rejected as non-generic.
std::vector<GradientFlowTree> find_gradient_trees(const MorseSequence& seq,
                                                  const std::vector<CriticalPoint>& q_in,
                                                  const CriticalPoint& q_out,
                                                  const TreeTopology& t,
                                                  double margin = 1e-4);

// Signed count over all topologies; zero when the degree condition fails.
int morse_product(const MorseSequence& seq, const std::vector<CriticalPoint>& q_in,
                  const CriticalPoint& q_out, double margin = 1e-4);

// A(q⃗) = f_{0k}(q_{0k}) - Σ f_{i,i+1}(q_{i,i+1}). Throws when some q is
// not a critical point of its pair.
double action(const MorseSequence& seq, const std::vector<CriticalPoint>& q_in,
              const CriticalPoint& q_out);

// Tree-length functional ρ⃗_T at the given vertex positions: the summed
// Agmon lengths of all edges with endpoints on the critical tuple. Bounded
// below by action(), with equality exactly at gradient flow trees.
double tree_length(const MorseSequence& seq, const std::vector<CriticalPoint>& q_in,
                   const CriticalPoint& q_out, const TreeTopology& t,
                   const std::vector<double>& vertex_positions);

}  // namespace mwl
