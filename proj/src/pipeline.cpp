#include "mwl/pipeline.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "mwl/errors.hpp"

namespace mwl {

namespace {

constexpr double kEntryFloor = 1e-15;   // eigenvector tail floor, per unit amplitude
constexpr double kMatvecEps = 1e-16;    // dense matvec roundoff per unit
constexpr double kNoiseThreshold = 3.0; // validity: |pairing| > 3 × noise bound

// pointwise wedge on collocated cochains
Eigen::VectorXd circle_product(int, int, const Eigen::VectorXd& b,
                               const Eigen::VectorXd& a) {
    return b.cwiseProduct(a);
}

// value + error-profile pair for the noise propagation
struct Tracked {
    GradedVec val;
    GradedVec err;  // entrywise nonnegative bound
};

Tracked tracked_leaf(int max_deg, int deg, const Eigen::VectorXd& phi) {
    Tracked t;
    t.val = GradedVec::homogeneous(max_deg, deg, phi);
    double floor = kEntryFloor * phi.lpNorm<Eigen::Infinity>();
    t.err = GradedVec::homogeneous(
        max_deg, deg, Eigen::VectorXd::Constant(phi.size(), floor));
    return t;
}

Tracked tracked_wedge(const DgCategory& cat, const Tracked& b, const Tracked& a) {
    Tracked t;
    t.val = cat.wedge(b.val, a.val);
    t.err = GradedVec(cat.max_deg);
    for (int db = 0; db <= cat.max_deg; ++db) {
        if (b.val.comp[db].size() == 0) continue;
        for (int da = 0; da + db <= cat.max_deg; ++da) {
            if (a.val.comp[da].size() == 0) continue;
            Eigen::VectorXd e = b.err.comp[db].cwiseProduct(a.val.comp[da].cwiseAbs()) +
                                a.err.comp[da].cwiseProduct(b.val.comp[db].cwiseAbs());
            t.err.add(db + da, e);
        }
    }
    return t;
}

// apply a degree-shifting operator with the matvec error model
// err' = |M|(err + eps|x|)
Tracked tracked_apply(const DgCategory& cat, const std::vector<Eigen::MatrixXd>& op,
                      int shift, const Tracked& x) {
    Tracked t;
    t.val = cat.apply(op, shift, x.val);
    t.err = GradedVec(cat.max_deg);
    for (int l = 0; l <= cat.max_deg; ++l) {
        if (x.val.comp[l].size() == 0 ||
            l >= static_cast<int>(op.size()) || op[l].size() == 0)
            continue;
        int lt = l + shift;
        if (lt < 0 || lt > cat.max_deg) continue;
        Eigen::VectorXd bound =
            op[l].cwiseAbs() *
            (x.err.comp[l] + kMatvecEps * x.val.comp[l].cwiseAbs());
        t.err.add(lt, bound);
    }
    return t;
}

Tracked eval_tracked(const DgCategory& cat, const TreeTopology& t,
                     const std::vector<int>& chain,
                     const std::vector<Tracked>& inputs, int node) {
    const TreeNode& nd = t.nodes[node];
    if (nd.is_leaf()) return inputs[nd.slot_lo];
    Tracked L = eval_tracked(cat, t, chain, inputs, nd.left);
    Tracked R = eval_tracked(cat, t, chain, inputs, nd.right);
    Tracked w = tracked_wedge(cat, R, L);
    const PairOps& po = cat.ops(chain[nd.out_label.i], chain[nd.out_label.j]);
    if (node == t.root()) return tracked_apply(cat, po.P, 0, w);
    return tracked_apply(cat, po.H, -1, w);
}

}  // namespace

nlohmann::json ProductPoint::to_json(const ProductExperiment& ex) const {
    nlohmann::json q = nlohmann::json::array();
    for (const auto& c : ex.q_in) q.push_back({{"theta", c.theta}, {"index", c.index}});
    q.push_back({{"theta", ex.q_out.theta}, {"index", ex.q_out.index}});
    nlohmann::json trees = nlohmann::json::array();
    for (size_t t = 0; t < tree_pairing.size(); ++t)
        trees.push_back(
            {{"topology_id", t},
             {"pairing_log_abs",
              tree_pairing[t] == 0.0 ? 0.0 : std::log(std::abs(tree_pairing[t]))},
             {"sign", tree_pairing[t] > 0 ? 1 : (tree_pairing[t] < 0 ? -1 : 0)}});
    return nlohmann::json{
        {"k", ex.k()},
        {"q_tuple", q},
        {"hbar", hbar},
        {"pairing_log_abs", pairing == 0.0 ? 0.0 : std::log(std::abs(pairing))},
        {"pairing_sign", pairing > 0 ? 1 : (pairing < 0 ? -1 : 0)},
        {"per_tree", trees}};
}

ProductPoint evaluate_product(const ProductExperiment& ex, double hbar) {
    const int k = ex.k();
    if (static_cast<int>(ex.q_in.size()) != k)
        throw std::invalid_argument("evaluate_product: tuple size mismatch");
    MorseSequence seq(ex.fs);
    CircleGrid g(ex.n);

    ProductPoint pt;
    pt.hbar = hbar;

    DgCategory cat;
    cat.max_deg = 1;
    cat.product = circle_product;

    auto count_index = [&](int i, int j, int idx) {
        int c = 0;
        for (const auto& q : seq.criticals(i, j)) c += (q.index == idx);
        return c;
    };

    // leaf inputs: localized, normalized eigenforms
    std::vector<Tracked> inputs;
    std::vector<GradedVec> plain_inputs;
    for (int s = 0; s < k; ++s) {
        WittenData w(g, seq.diff(s, s + 1), hbar);
        int deg = ex.q_in[s].index;
        SpectralData sd = decompose(witten_laplacian(w, deg), hbar);
        SmallSubspace S = small_spectrum(sd, count_index(s, s + 1, deg));
        pt.gap_warning = pt.gap_warning || S.gap_warning;
        EigenformBasis B = phi_map(S, seq.diff(s, s + 1), seq.criticals(s, s + 1), w);
        Eigen::VectorXd phi = B.phis.col(B.find(ex.q_in[s]));
        inputs.push_back(tracked_leaf(cat.max_deg, deg, phi));
        plain_inputs.push_back(inputs.back().val);
        if (k == 1) {
            // m_1 needs d and P of the single pair
            PairOps po;
            po.d.resize(2);
            po.H.resize(2);
            po.P.resize(2);
            po.small.resize(2);
            po.d[0] = witten_d(w).m;
            SpectralData so = decompose(witten_laplacian(w, ex.q_out.index), hbar);
            po.P[ex.q_out.index] = projector(so).m;
            cat.pairs[{0, 1}] = po;
        }
    }

    // output pair: eigenform, norm, projector
    Eigen::VectorXd phi_out;
    {
        WittenData w(g, seq.diff(0, k), hbar);
        int deg = ex.q_out.index;
        SpectralData sd = decompose(witten_laplacian(w, deg), hbar);
        SmallSubspace S = small_spectrum(sd, count_index(0, k, deg));
        pt.gap_warning = pt.gap_warning || S.gap_warning;
        EigenformBasis B = phi_map(S, seq.diff(0, k), seq.criticals(0, k), w);
        int col = B.find(ex.q_out);
        phi_out = B.phis.col(col);
        pt.norm_out_sq = B.norm_sq[col];
        if (k > 1) {
            PairOps po;
            po.d.resize(2);
            po.H.resize(2);
            po.P.resize(2);
            po.small.resize(2);
            po.P[deg] = projector(sd).m;
            cat.pairs[{0, k}] = po;
        }
    }

    // homotopy operators for the internal edge labels
    for (int i = 0; i < k; ++i)
        for (int j = i + 2; j <= k; ++j) {
            if (i == 0 && j == k) continue;
            WittenData w(g, seq.diff(i, j), hbar);
            SpectralData s0 = decompose(witten_laplacian(w, 0), hbar);
            SpectralData s1 = decompose(witten_laplacian(w, 1), hbar);
            HomotopyData hd = homotopy(w, s0, s1);
            pt.homotopy_residual =
                std::max({pt.homotopy_residual, hd.residual_deg0, hd.residual_deg1});
            PairOps po;
            po.d.resize(2);
            po.H.resize(2);
            po.P.resize(2);
            po.small.resize(2);
            po.d[0] = witten_d(w).m;
            po.H[1] = hd.H.m;
            po.P[0] = hd.P0.m;
            po.P[1] = hd.P1.m;
            cat.pairs[{i, j}] = po;
        }

    std::vector<int> chain(k + 1);
    for (int s = 0; s <= k; ++s) chain[s] = s;

    auto pair_with_out = [&](const GradedVec& v, const GradedVec& e) {
        int deg = ex.q_out.index;
        double val = 0.0, noise = 0.0;
        if (deg < static_cast<int>(v.comp.size()) && v.comp[deg].size() > 0) {
            val = g.inner(v.comp[deg], phi_out) / pt.norm_out_sq;
            Eigen::VectorXd ape = phi_out.cwiseAbs();
            noise = g.h *
                    (e.comp[deg].dot(ape) +
                     kMatvecEps * v.comp[deg].cwiseAbs().dot(ape)) /
                    pt.norm_out_sq;
        }
        // the output eigenform has its own entry floor
        double out_floor = kEntryFloor * phi_out.lpNorm<Eigen::Infinity>();
        if (deg < static_cast<int>(v.comp.size()) && v.comp[deg].size() > 0)
            noise += g.h * out_floor * v.comp[deg].cwiseAbs().sum() / pt.norm_out_sq;
        return std::make_pair(val, noise);
    };

    auto tops = enumerate_topologies(k);
    double total_val = 0.0, total_noise = 0.0;
    for (const auto& t : tops) {
        Tracked r;
        if (k == 1) {
            // m_1 = P d ι with the matvec error model
            const PairOps& po = cat.ops(0, 1);
            Tracked x = inputs[0];
            r = tracked_apply(cat, po.P, 0, tracked_apply(cat, po.d, +1, x));
        } else {
            r = eval_tracked(cat, t, chain, inputs, t.root());
        }
        auto [val, noise] = pair_with_out(r.val, r.err);
        pt.tree_pairing.push_back(val);
        pt.tree_noise.push_back(noise);
        total_val += val;
        total_noise += noise;
    }
    pt.pairing = total_val;
    pt.noise_est = total_noise;
    return pt;
}

SweepResult hbar_sweep(const ProductExperiment& ex,
                       const std::vector<double>& hbars) {
    const int k = ex.k();
    MorseSequence seq(ex.fs);
    SweepResult sr;
    sr.k = k;
    sr.action_ref = action(seq, ex.q_in, ex.q_out);
    sr.count_ref = morse_product(seq, ex.q_in, ex.q_out, ex.margin);
    auto tops = enumerate_topologies(k);
    sr.topologies = static_cast<int>(tops.size());
    for (const auto& t : tops) {
        auto trees = find_gradient_trees(seq, ex.q_in, ex.q_out, t, ex.margin);
        int cnt = 0;
        for (const auto& tr : trees) cnt += tr.sign;
        sr.tree_count.push_back(cnt);
        if (!trees.empty()) {
            sr.tree_length_min.push_back(
                tree_length(seq, ex.q_in, ex.q_out, t, trees[0].vertex_positions));
        } else if (k == 1) {
            sr.tree_length_min.push_back(agmon_distance(
                seq.diff(0, 1), seq.criticals(0, 1), ex.q_in[0].theta, ex.q_out.theta));
        } else {
            // coarse minimization of the length functional over vertices
            std::vector<int> internal;
            for (size_t m = 0; m < t.nodes.size(); ++m)
                if (!t.nodes[m].is_leaf()) internal.push_back(static_cast<int>(m));
            const int grid = internal.size() == 1 ? 4096 : 192;
            double best = 1e300;
            std::vector<double> x(t.nodes.size(), 0.0);
            std::vector<int> idx(internal.size(), 0);
            while (true) {
                for (size_t d = 0; d < internal.size(); ++d)
                    x[internal[d]] = idx[d] * kTwoPi / grid;
                best = std::min(best, tree_length(seq, ex.q_in, ex.q_out, t, x));
                size_t d = 0;
                while (d < idx.size() && ++idx[d] == grid) idx[d++] = 0;
                if (d == idx.size()) break;
            }
            sr.tree_length_min.push_back(best);
        }
    }

    for (double hbar : hbars) {
        SweepPoint p;
        p.hbar = hbar;
        try {
            ProductPoint pp = evaluate_product(ex, hbar);
            p.gap_warning = pp.gap_warning;
            p.tree_log_abs.resize(pp.tree_pairing.size(), 0.0);
            p.tree_sign.resize(pp.tree_pairing.size(), 0);
            p.tree_valid.resize(pp.tree_pairing.size(), false);
            for (size_t t = 0; t < pp.tree_pairing.size(); ++t) {
                double v = pp.tree_pairing[t];
                if (std::abs(v) > kNoiseThreshold * pp.tree_noise[t]) {
                    p.tree_log_abs[t] = std::log(std::abs(v));
                    p.tree_sign[t] = v > 0 ? 1 : -1;
                    p.tree_valid[t] = true;
                }
            }
            if (std::abs(pp.pairing) > kNoiseThreshold * pp.noise_est) {
                p.valid = true;
                p.log_abs = std::log(std::abs(pp.pairing));
                p.sign = pp.pairing > 0 ? 1 : -1;
                p.noise_est = pp.noise_est;
            } else {
                p.flag = "noise-floor";
                p.noise_est = pp.noise_est;
            }
        } catch (const RegimeError& e) {
            p.flag = std::string("regime: ") + e.what();
        } catch (const LocalizationError& e) {
            p.flag = std::string("localization: ") + e.what();
        }
        sr.points.push_back(std::move(p));
    }
    return sr;
}

SpectralCategory build_spectral_category(const std::vector<TrigPoly>& fs, int n,
                                         double hbar) {
    MorseSequence seq(fs);
    CircleGrid g(n);
    SpectralCategory sc;
    sc.cat.max_deg = 1;
    sc.cat.product = circle_product;
    const int kk = static_cast<int>(fs.size()) - 1;
    for (int i = 0; i < kk; ++i)
        for (int j = i + 1; j <= kk; ++j) {
            WittenData w(g, seq.diff(i, j), hbar);
            SpectralData s0 = decompose(witten_laplacian(w, 0), hbar);
            SpectralData s1 = decompose(witten_laplacian(w, 1), hbar);
            sc.gap_warning = sc.gap_warning || s0.gap_ratio <= 10 || s1.gap_ratio <= 10;
            HomotopyData hd = homotopy(w, s0, s1);
            sc.max_homotopy_residual = std::max(
                {sc.max_homotopy_residual, hd.residual_deg0, hd.residual_deg1});
            PairOps po;
            po.d.resize(2);
            po.H.resize(2);
            po.P.resize(2);
            po.small.resize(2);
            po.d[0] = witten_d(w).m;
            po.H[1] = hd.H.m;
            po.P[0] = hd.P0.m;
            po.P[1] = hd.P1.m;
            po.small[0] = s0.vecs.leftCols(s0.m_small);
            po.small[1] = s1.vecs.leftCols(s1.m_small);
            po.homotopy_residual = std::max(hd.residual_deg0, hd.residual_deg1);
            sc.cat.pairs[{i, j}] = po;
        }
    return sc;
}

EdgeAmplification homotopy_amplification_check(const ProductExperiment& ex,
                                               double hbar) {
    if (ex.k() != 3)
        throw std::invalid_argument("homotopy_amplification_check: needs k = 3");
    MorseSequence seq(ex.fs);
    CircleGrid g(ex.n);

    // locate the populated topology and its rigid tree
    TreeTopology top_copy;
    GradientFlowTree tree;
    bool found = false;
    for (const auto& t : enumerate_topologies(3)) {
        auto trees = find_gradient_trees(seq, ex.q_in, ex.q_out, t, ex.margin);
        if (!trees.empty()) {
            top_copy = t;
            tree = trees[0];
            found = true;
            break;
        }
    }
    if (!found)
        throw std::invalid_argument(
            "homotopy_amplification_check: no rigid tree for this tuple");

    int v_node = -1;
    for (size_t m = 0; m < top_copy.nodes.size(); ++m)
        if (!top_copy.nodes[m].is_leaf() &&
            static_cast<int>(m) != top_copy.root())
            v_node = static_cast<int>(m);
    const TreeNode& vn = top_copy.nodes[v_node];
    EdgeLabel el = vn.out_label;
    double xv = tree.vertex_positions[v_node];
    double xr = tree.vertex_positions[top_copy.root()];

    EdgeAmplification ea;
    ea.vertex = xv;
    ea.root = xr;
    ea.topology_id = top_copy.id;

    // source form: wedge of the two leaf eigenforms at the vertex
    auto leaf_phi = [&](int slot) {
        WittenData w(g, seq.diff(slot, slot + 1), hbar);
        int deg = ex.q_in[slot].index;
        int expected = 0;
        for (const auto& q : seq.criticals(slot, slot + 1))
            expected += (q.index == deg);
        SmallSubspace S = small_spectrum(witten_laplacian(w, deg), hbar, expected);
        EigenformBasis B =
            phi_map(S, seq.diff(slot, slot + 1), seq.criticals(slot, slot + 1), w);
        return std::make_pair(B.phis.col(B.find(ex.q_in[slot])), deg);
    };
    auto [phi_l, deg_l] = leaf_phi(top_copy.nodes[vn.left].slot_lo);
    auto [phi_r, deg_r] = leaf_phi(top_copy.nodes[vn.right].slot_lo);
    if (deg_l + deg_r != 1)
        throw std::invalid_argument(
            "homotopy_amplification_check: source wedge must have degree 1");
    Eigen::VectorXd xi = phi_r.cwiseProduct(phi_l);

    // cutoff around the vertex, clear of every other marked point
    double w_cut = 1e300;
    for (double other :
         {xr, ex.q_in[0].theta, ex.q_in[1].theta, ex.q_in[2].theta, ex.q_out.theta}) {
        double d = std::abs(wrap_angle(xv - other + kTwoPi / 2) - kTwoPi / 2);
        if (d > 1e-9) w_cut = std::min(w_cut, d);
    }
    w_cut *= 0.6;
    Eigen::VectorXd chi(g.n);
    for (int m = 0; m < g.n; ++m) {
        double d = std::abs(wrap_angle(g.theta(m) - xv + kTwoPi / 2) - kTwoPi / 2) /
                   w_cut;
        chi[m] = d <= 0.5 ? 1.0 : (d >= 1.0 ? 0.0 : 0.5 * (1 + std::cos((d - 0.5) * kTwoPi / 2)));
    }
    Eigen::VectorXd src = chi.cwiseProduct(xi);

    // homotopy of the edge pair
    WittenData w(g, seq.diff(el.i, el.j), hbar);
    SpectralData s0 = decompose(witten_laplacian(w, 0), hbar);
    SpectralData s1 = decompose(witten_laplacian(w, 1), hbar);
    HomotopyData hd = homotopy(w, s0, s1);
    Eigen::VectorXd xe = hd.H.m * src;

    ea.lhs = g.interpolate(xe, xr);
    ea.rhs = (g.h * src.sum()) / hbar;
    ea.ratio = ea.lhs / ea.rhs;
    return ea;
}

}  // namespace mwl
