#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "mwl/trees.hpp"

namespace mwl {

// Element of a graded chain space: one coefficient vector per degree.
// Empty vectors stand for zero components.
struct GradedVec {
    std::vector<Eigen::VectorXd> comp;  // comp[deg]
    explicit GradedVec(int max_deg = 0) : comp(max_deg + 1) {}
    static GradedVec homogeneous(int max_deg, int deg, Eigen::VectorXd v);
    GradedVec& add(int deg, const Eigen::VectorXd& v);
    bool is_zero(double tol = 0.0) const;
    double norm() const;
    // degree of the single nonzero component; -1 when zero or mixed
    int homogeneous_degree(double tol = 1e-300) const;
};

// Full-complex operators of one morphism space (one ordered pair of
// objects): differential, homotopy, projector and small-subspace basis,
// all indexed by the domain degree.
struct PairOps {
    std::vector<Eigen::MatrixXd> d;      // d[l]: deg l -> l+1 (top entry empty)
    std::vector<Eigen::MatrixXd> H;      // H[l]: deg l -> l-1 (H[0] empty)
    std::vector<Eigen::MatrixXd> P;      // P[l]: projector onto the retract
    std::vector<Eigen::MatrixXd> small;  // small[l]: orthonormal basis columns
    double homotopy_residual = 0.0;
};

// A dg category presented by dense matrices: chain spaces per ordered
// pair of objects, a graded associative product, and a homotopy retract
// per pair. The product maps Hom(j,l) x Hom(i,j) -> Hom(i,l) and is
// object-independent in both realizations used here (pointwise wedge on
// the circle, exterior product on the toy complex).
struct DgCategory {
    int max_deg = 1;
    std::function<Eigen::VectorXd(int, int, const Eigen::VectorXd&,
                                  const Eigen::VectorXd&)>
        product;  // (deg_b, deg_a, b, a) -> b ∧ a
    std::map<std::pair<int, int>, PairOps> pairs;
    const PairOps& ops(int i, int j) const;
    GradedVec wedge(const GradedVec& b, const GradedVec& a) const;
    GradedVec apply(const std::vector<Eigen::MatrixXd>& op, int shift,
                    const GradedVec& x) const;  // degree shift of op
};

// One tree contribution to m_k, following the directed-tree rules:
// inclusion at incoming leaves, product at vertices, homotopy on internal
// edges, projection at the root. `chain` lists the k+1 object indices the
// leaves connect (chain[s] -> chain[s+1] is leaf slot s).
GradedVec mk_tree(const DgCategory& cat, const TreeTopology& t,
                  const std::vector<int>& chain,
                  const std::vector<GradedVec>& inputs);

// Same contribution with the homological-perturbation sign for homogeneous
// inputs (Koszul convention fixed by the exact toy-retract test).
GradedVec mk_tree_signed(const DgCategory& cat, const TreeTopology& t,
                         const std::vector<int>& chain,
                         const std::vector<GradedVec>& inputs);

// Full product: plain sum over tree topologies (per-tree pieces kept).
struct TreeSum {
    GradedVec total;
    std::vector<GradedVec> per_tree;  // indexed by topology id
};
TreeSum mk_total(const DgCategory& cat, const std::vector<int>& chain,
                 const std::vector<GradedVec>& inputs);

// Transferred product used by the relation checker: signed sum over trees
// (for k <= 2 it coincides with mk_total).
GradedVec transfer_mk(const DgCategory& cat, const std::vector<int>& chain,
                      const std::vector<GradedVec>& inputs);

// Max relative residual of the A-infinity relations
//   Σ_{r+s+t=n} (-1)^{r+st} m_{r+1+t}(1^r ⊗ m_s ⊗ 1^t) = 0,  n <= k_max,
// evaluated on the given homogeneous small-subspace tuples along `chain`.
double a_infinity_residual(const DgCategory& cat, const std::vector<int>& chain,
                           const std::vector<std::vector<GradedVec>>& tuples,
                           int k_max);

}  // namespace mwl
