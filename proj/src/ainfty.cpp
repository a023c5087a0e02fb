#include "mwl/ainfty.hpp"

#include <cmath>
#include <stdexcept>

namespace mwl {

GradedVec GradedVec::homogeneous(int max_deg, int deg, Eigen::VectorXd v) {
    GradedVec g(max_deg);
    g.comp[deg] = std::move(v);
    return g;
}

GradedVec& GradedVec::add(int deg, const Eigen::VectorXd& v) {
    if (deg >= static_cast<int>(comp.size())) comp.resize(deg + 1);
    if (comp[deg].size() == 0) comp[deg] = v;
    else comp[deg] += v;
    return *this;
}

bool GradedVec::is_zero(double tol) const {
    for (const auto& c : comp)
        if (c.size() > 0 && c.lpNorm<Eigen::Infinity>() > tol) return false;
    return true;
}

double GradedVec::norm() const {
    double s = 0.0;
    for (const auto& c : comp) s += c.squaredNorm();
    return std::sqrt(s);
}

int GradedVec::homogeneous_degree(double tol) const {
    int deg = -1;
    for (size_t l = 0; l < comp.size(); ++l) {
        if (comp[l].size() == 0 || comp[l].lpNorm<Eigen::Infinity>() <= tol) continue;
        if (deg >= 0) return -1;  // mixed
        deg = static_cast<int>(l);
    }
    return deg;
}

const PairOps& DgCategory::ops(int i, int j) const {
    auto it = pairs.find({i, j});
    if (it == pairs.end())
        throw std::invalid_argument("DgCategory: no operators for requested pair");
    return it->second;
}

GradedVec DgCategory::wedge(const GradedVec& b, const GradedVec& a) const {
    GradedVec out(max_deg);
    for (int db = 0; db <= max_deg; ++db) {
        if (db >= static_cast<int>(b.comp.size()) || b.comp[db].size() == 0) continue;
        for (int da = 0; da + db <= max_deg; ++da) {
            if (da >= static_cast<int>(a.comp.size()) || a.comp[da].size() == 0)
                continue;
            out.add(db + da, product(db, da, b.comp[db], a.comp[da]));
        }
    }
    return out;
}

GradedVec DgCategory::apply(const std::vector<Eigen::MatrixXd>& op, int shift,
                            const GradedVec& x) const {
    GradedVec out(max_deg);
    for (int l = 0; l <= max_deg; ++l) {
        if (l >= static_cast<int>(x.comp.size()) || x.comp[l].size() == 0) continue;
        int lt = l + shift;
        if (lt < 0 || lt > max_deg) continue;
        if (l >= static_cast<int>(op.size()) || op[l].size() == 0) continue;
        out.add(lt, op[l] * x.comp[l]);
    }
    return out;
}

namespace {

// m_1 = P d restricted to the retract.
GradedVec apply_m1(const DgCategory& cat, int ci, int cj, const GradedVec& x) {
    const PairOps& po = cat.ops(ci, cj);
    return cat.apply(po.P, 0, cat.apply(po.d, +1, x));
}

GradedVec eval_plain(const DgCategory& cat, const TreeTopology& t,
                     const std::vector<int>& chain,
                     const std::vector<GradedVec>& inputs, int node) {
    const TreeNode& nd = t.nodes[node];
    if (nd.is_leaf()) return inputs[nd.slot_lo];
    GradedVec L = eval_plain(cat, t, chain, inputs, nd.left);
    GradedVec R = eval_plain(cat, t, chain, inputs, nd.right);
    GradedVec w = cat.wedge(R, L);  // φ_{jl} ∧ φ_{ij}
    const PairOps& po = cat.ops(chain[nd.out_label.i], chain[nd.out_label.j]);
    if (node == t.root()) return cat.apply(po.P, 0, w);
    return cat.apply(po.H, -1, w);
}

// Homological-perturbation sign bookkeeping (Koszul convention validated
// by the exact toy-retract residual test):
//   - each vertex joining blocks of sizes (s_left, s_right) carries
//     (-1)^{s_right + 1},
//   - the left operator Qλ_{s_left} (degree 1 - s_left for s_left >= 2)
//     passes the right-block inputs: (-1)^{|Qλ_{s_left}| · deg(right block)},
//   - each leaf child contributes Qλ_1 = -id,
//   - the homotopy enters as Q = H.
struct SignedEval {
    GradedVec val;
    int leaves = 0;
    int degsum = 0;
};

SignedEval eval_signed(const DgCategory& cat, const TreeTopology& t,
                       const std::vector<int>& chain,
                       const std::vector<GradedVec>& inputs, int node) {
    const TreeNode& nd = t.nodes[node];
    if (nd.is_leaf()) {
        SignedEval se;
        se.val = inputs[nd.slot_lo];
        int d = se.val.homogeneous_degree();
        se.degsum = d < 0 ? 0 : d;
        se.leaves = 1;
        // Qλ_1 = -id
        for (auto& c : se.val.comp) c = -c;
        return se;
    }
    SignedEval L = eval_signed(cat, t, chain, inputs, nd.left);
    SignedEval R = eval_signed(cat, t, chain, inputs, nd.right);
    SignedEval out;
    out.leaves = L.leaves + R.leaves;
    out.degsum = L.degsum + R.degsum;
    double sign = (R.leaves % 2 == 0) ? -1.0 : 1.0;  // (-1)^{s_right+1}
    int q_left_deg = (L.leaves >= 2) ? (1 - L.leaves) : 0;
    if (((q_left_deg % 2) + 2) % 2 == 1 && R.degsum % 2 == 1) sign = -sign;
    GradedVec w = cat.wedge(R.val, L.val);
    const PairOps& po = cat.ops(chain[nd.out_label.i], chain[nd.out_label.j]);
    if (node == t.root()) out.val = cat.apply(po.P, 0, w);
    else out.val = cat.apply(po.H, -1, w);
    for (auto& c : out.val.comp) c *= sign;
    return out;
}

}  // namespace

GradedVec mk_tree(const DgCategory& cat, const TreeTopology& t,
                  const std::vector<int>& chain,
                  const std::vector<GradedVec>& inputs) {
    if (static_cast<int>(chain.size()) != t.leaf_count + 1)
        throw std::invalid_argument("mk_tree: chain has wrong length");
    if (static_cast<int>(inputs.size()) != t.leaf_count)
        throw std::invalid_argument("mk_tree: one input per leaf");
    if (t.leaf_count == 1) return apply_m1(cat, chain[0], chain[1], inputs[0]);
    return eval_plain(cat, t, chain, inputs, t.root());
}

GradedVec mk_tree_signed(const DgCategory& cat, const TreeTopology& t,
                         const std::vector<int>& chain,
                         const std::vector<GradedVec>& inputs) {
    if (t.leaf_count == 1) return apply_m1(cat, chain[0], chain[1], inputs[0]);
    return eval_signed(cat, t, chain, inputs, t.root()).val;
}

TreeSum mk_total(const DgCategory& cat, const std::vector<int>& chain,
                 const std::vector<GradedVec>& inputs) {
    const int k = static_cast<int>(inputs.size());
    TreeSum ts;
    ts.total = GradedVec(cat.max_deg);
    for (const auto& t : enumerate_topologies(k)) {
        GradedVec v = mk_tree(cat, t, chain, inputs);
        ts.per_tree.push_back(v);
        for (int l = 0; l <= cat.max_deg; ++l)
            if (v.comp[l].size() > 0) ts.total.add(l, v.comp[l]);
    }
    return ts;
}

GradedVec transfer_mk(const DgCategory& cat, const std::vector<int>& chain,
                      const std::vector<GradedVec>& inputs) {
    const int k = static_cast<int>(inputs.size());
    GradedVec total(cat.max_deg);
    for (const auto& t : enumerate_topologies(k)) {
        GradedVec v = mk_tree_signed(cat, t, chain, inputs);
        for (int l = 0; l <= cat.max_deg; ++l)
            if (v.comp[l].size() > 0) total.add(l, v.comp[l]);
    }
    return total;
}

double a_infinity_residual(const DgCategory& cat, const std::vector<int>& chain,
                           const std::vector<std::vector<GradedVec>>& tuples,
                           int k_max) {
    double worst = 0.0;
    for (const auto& tup : tuples) {
        const int n = static_cast<int>(tup.size());
        if (n > k_max) continue;
        std::vector<int> degs(n, 0);
        for (int s = 0; s < n; ++s) {
            int d = tup[s].homogeneous_degree();
            degs[s] = d < 0 ? 0 : d;
        }
        GradedVec total(cat.max_deg);
        double scale = 0.0;
        // inner block: slots [p, p+s)
        for (int s = 1; s <= n; ++s)
            for (int p = 0; p + s <= n; ++p) {
                std::vector<int> inner_chain(chain.begin() + p,
                                             chain.begin() + p + s + 1);
                std::vector<GradedVec> inner(tup.begin() + p, tup.begin() + p + s);
                GradedVec ms = transfer_mk(cat, inner_chain, inner);
                std::vector<int> outer_chain(chain.begin(), chain.begin() + p + 1);
                outer_chain.insert(outer_chain.end(), chain.begin() + p + s,
                                   chain.end());
                std::vector<GradedVec> outer(tup.begin(), tup.begin() + p);
                outer.push_back(ms);
                outer.insert(outer.end(), tup.begin() + p + s, tup.end());
                GradedVec term = transfer_mk(cat, outer_chain, outer);
                // composition-order data: r elements precede the block,
                // t elements follow it
                int r = n - p - s;
                int tt = p;
                int prefix_deg = 0;
                for (int q = p + s; q < n; ++q) prefix_deg += degs[q];
                double sign = ((r + s * tt) % 2 == 0) ? 1.0 : -1.0;
                // Koszul: operator m_s (degree 2-s) passes the first r inputs
                if (((2 - s) % 2 + 2) % 2 == 1 && prefix_deg % 2 == 1) sign = -sign;
                for (int l = 0; l <= cat.max_deg; ++l)
                    if (term.comp[l].size() > 0) total.add(l, sign * term.comp[l]);
                scale += term.norm();
            }
        if (scale > 0) worst = std::max(worst, total.norm() / scale);
    }
    return worst;
}

}  // namespace mwl
