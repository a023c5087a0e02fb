#include "mwl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "mwl/errors.hpp"

namespace mwl {

SpectralData decompose(const LinearMap& delta, double hbar) {
    if (delta.dom_deg != delta.cod_deg)
        throw std::invalid_argument("decompose: operator must preserve degree");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(delta.m);
    if (es.info() != Eigen::Success)
        throw AssemblyError("decompose: eigensolver failed to converge");
    SpectralData sd;
    sd.degree = delta.dom_deg;
    sd.hbar = hbar;
    sd.cutoff = std::pow(hbar, 1.5);
    sd.eigs = es.eigenvalues();
    sd.vecs = es.eigenvectors();
    sd.m_small = 0;
    const int n = static_cast<int>(sd.eigs.size());
    while (sd.m_small < n && sd.eigs[sd.m_small] < sd.cutoff) ++sd.m_small;
    if (sd.m_small == n)
        throw RegimeError("decompose: entire spectrum below hbar^{3/2}");
    sd.first_excluded = sd.eigs[sd.m_small];
    sd.gap_ratio = sd.first_excluded / sd.cutoff;
    return sd;
}

SmallSubspace small_spectrum(const SpectralData& sd, int expected_dim) {
    SmallSubspace S;
    S.degree = sd.degree;
    S.hbar = sd.hbar;
    S.eigenvalues.assign(sd.eigs.data(), sd.eigs.data() + sd.m_small);
    S.basis = sd.vecs.leftCols(sd.m_small);
    S.P = S.basis * S.basis.transpose();
    S.first_excluded = sd.first_excluded;
    S.gap_ratio = sd.gap_ratio;
    S.expected_dim = expected_dim;
    S.gap_warning = sd.gap_ratio < 10.0;
    if (expected_dim >= 0 && sd.m_small != expected_dim) {
        std::ostringstream os;
        os << "small_spectrum: dim " << sd.m_small << " != expected " << expected_dim
           << " (degree " << sd.degree << ", hbar " << sd.hbar << ", cutoff "
           << sd.cutoff << ", first excluded " << sd.first_excluded
           << "); decrease hbar or refine the grid";
        throw RegimeError(os.str());
    }
    return S;
}

SmallSubspace small_spectrum(const LinearMap& delta, double hbar, int expected_dim) {
    return small_spectrum(decompose(delta, hbar), expected_dim);
}

nlohmann::json SmallSubspace::report() const {
    return nlohmann::json{{"hbar", hbar},
                          {"degree", degree},
                          {"small_eigs", eigenvalues},
                          {"gap_ratio", gap_ratio},
                          {"dim", eigenvalues.size()},
                          {"expected_dim", expected_dim}};
}

LinearMap projector(const SpectralData& sd) {
    Eigen::MatrixXd P = sd.vecs.leftCols(sd.m_small) *
                        sd.vecs.leftCols(sd.m_small).transpose();
    return LinearMap{sd.degree, sd.degree, std::move(P)};
}

LinearMap green(const SpectralData& sd) {
    const int n = static_cast<int>(sd.eigs.size());
    const double top = sd.eigs[n - 1];
    if (sd.first_excluded < 1e-12 * top) {
        std::ostringstream os;
        os << "green: first excluded eigenvalue " << sd.first_excluded
           << " below conditioning floor relative to ||Δ|| = " << top;
        throw ConditioningError(os.str());
    }
    const int m = sd.m_small;
    Eigen::MatrixXd Vx = sd.vecs.rightCols(n - m);
    Eigen::VectorXd inv = sd.eigs.tail(n - m).cwiseInverse();
    Eigen::MatrixXd G = Vx * inv.asDiagonal() * Vx.transpose();
    return LinearMap{sd.degree, sd.degree, std::move(G)};
}

HomotopyData homotopy(const WittenData& w, const SpectralData& s0,
                      const SpectralData& s1) {
    if (s0.degree != 0 || s1.degree != 1)
        throw std::invalid_argument("homotopy: pass degree-0 and degree-1 data");
    if (s0.m_small != s1.m_small)
        throw AssemblyError("homotopy: small-subspace dimensions differ across degrees");
    HomotopyData hd;
    hd.P0 = projector(s0);
    hd.P1 = projector(s1);
    hd.G0 = green(s0);
    hd.G1 = green(s1);
    Eigen::MatrixXd A = witten_d(w).m;
    hd.H = LinearMap{1, 0, A.transpose() * hd.G1.m};

    const int n = w.grid.n;
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    // degree 0: H d = I - P0   (d H vanishes, no degree -1)
    double r0 = (hd.H.m * A - (I - hd.P0.m)).norm() / I.norm();
    // degree 1: d H = I - P1   (H d vanishes, no degree 2)
    double r1 = (A * hd.H.m - (I - hd.P1.m)).norm() / I.norm();
    hd.residual_deg0 = r0;
    hd.residual_deg1 = r1;
    if (r0 > 1e-6 || r1 > 1e-6) {
        std::ostringstream os;
        os << "homotopy: identity residuals " << r0 << ", " << r1
           << " exceed 1e-6 (mismatched subspaces between degrees?)";
        throw AssemblyError(os.str());
    }
    return hd;
}

namespace {

// ρ(q, θ_m) for every grid node.
Eigen::VectorXd agmon_profile(const TrigPoly& f,
                              const std::vector<CriticalPoint>& crit,
                              const CircleGrid& g, double q_theta) {
    Eigen::VectorXd rho(g.n);
    for (int m = 0; m < g.n; ++m)
        rho[m] = agmon_distance(f, crit, q_theta, g.theta(m));
    return rho;
}

double smooth_step(double t) {
    // 1 for t <= 0.8, 0 for t >= 1, C¹ cosine roll in between
    if (t <= 0.8) return 1.0;
    if (t >= 1.0) return 0.0;
    return 0.5 * (1.0 + std::cos((t - 0.8) / 0.2 * kTwoPi / 2));
}

}  // namespace

int EigenformBasis::find(const CriticalPoint& q) const {
    int best = -1;
    double bd = 1e300;
    for (size_t c = 0; c < points.size(); ++c) {
        double d = std::abs(wrap_angle(points[c].theta - q.theta + kTwoPi / 2) -
                            kTwoPi / 2);
        if (d < bd) { bd = d; best = static_cast<int>(c); }
    }
    if (best < 0 || bd > 1e-6)
        throw std::invalid_argument("EigenformBasis::find: point not in basis");
    return best;
}

EigenformBasis phi_map(const SmallSubspace& S, const TrigPoly& f,
                       const std::vector<CriticalPoint>& criticals,
                       const WittenData& w) {
    const CircleGrid& g = w.grid;
    EigenformBasis B;
    B.degree = S.degree;
    B.hbar = S.hbar;
    for (const auto& c : criticals)
        if (c.index == S.degree) B.points.push_back(c);
    const int m = static_cast<int>(B.points.size());
    if (m != static_cast<int>(S.eigenvalues.size()))
        throw LocalizationError("phi_map: subspace dimension does not match critical count");

    const Eigen::MatrixXd& V = S.basis;  // n x m
    Eigen::MatrixXd W(m, m);             // localized coordinates per point

    if (m == 1) {
        W(0, 0) = 1.0;
    } else {
        for (int c = 0; c < m; ++c) {
            const CriticalPoint& q = B.points[c];
            double eta = 1e300;
            for (int p = 0; p < m; ++p)
                if (p != c)
                    eta = std::min(eta, agmon_distance(f, criticals, q.theta,
                                                       B.points[p].theta));
            eta /= 3.0;
            Eigen::VectorXd rho = agmon_profile(f, criticals, g, q.theta);
            Eigen::VectorXd mask(g.n);
            for (int x = 0; x < g.n; ++x) mask[x] = smooth_step(rho[x] / eta);
            Eigen::MatrixXd Sq = V.transpose() * mask.asDiagonal() * V;
            Sq = 0.5 * (Sq + Sq.transpose()).eval();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Sq);
            Eigen::VectorXd ev = es.eigenvalues();
            if ((ev[m - 1] - ev[m - 2]) / std::max(ev[m - 1], 1e-300) < 1e-3)
                throw LocalizationError(
                    "phi_map: ambiguous localization (near-degenerate ball masses); "
                    "decrease hbar or perturb the sequence");
            W.col(c) = es.eigenvectors().col(m - 1);
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(W);
        if (svd.singularValues()(m - 1) < 0.5)
            throw LocalizationError(
                "phi_map: two critical points claim the same subspace vector; "
                "decrease hbar");
    }

    B.phis = V * W;  // n x m
    B.norm_sq.resize(m);
    B.closed_form_ratio.resize(m);

    for (int c = 0; c < m; ++c) {
        const CriticalPoint& q = B.points[c];
        Eigen::VectorXd phi = B.phis.col(c);
        // sign: agree with the counterclockwise orientation of V_q^- at q
        double at_q = g.interpolate(phi, q.theta);
        if (at_q < 0) phi = -phi;

        // normalization: discrete unstable-manifold integral = 1
        double integral = 0.0;
        if (S.degree == 0) {
            integral = g.interpolate(phi, q.theta);  // V^- is the point q
        } else {
            // V^- is the open arc between the adjacent minima
            int pos = -1;
            const int nc = static_cast<int>(criticals.size());
            for (int s = 0; s < nc; ++s)
                if (std::abs(criticals[s].theta - q.theta) < 1e-12) pos = s;
            const CriticalPoint& lo = criticals[(pos - 1 + nc) % nc];
            const CriticalPoint& hi = criticals[(pos + 1) % nc];
            double span = wrap_angle(hi.theta - lo.theta);
            if (span == 0.0) span = kTwoPi;  // single max: arc is everything
            double fq = f(q.theta);
            for (int x = 0; x < g.n; ++x) {
                double d = wrap_angle(g.theta(x) - lo.theta);
                if (d <= 1e-12 || d >= span - 1e-12) continue;
                integral += g.h * std::exp((w.f[x] - fq) / w.hbar) * phi[x];
            }
        }
        if (std::abs(integral) < 1e-14)
            throw LocalizationError("phi_map: unstable-manifold integral vanishes");
        // the same integral evaluated on the h-norm-1 version of phi
        double unit_integral = integral / (std::sqrt(g.h) * phi.norm());
        phi /= integral;
        B.phis.col(c) = phi;
        B.norm_sq[c] = g.norm_sq(phi);

        // closed-form constant (|λ-|/|λ+|)^{1/4} (π h / 2)^{(1/2)(n/2 - deg)}
        double lam = std::abs(q.hessian);
        double closed = std::pow(kTwoPi / 4 * w.hbar, 0.5 * (0.5 - S.degree)) *
                        (S.degree == 0 ? std::pow(lam, -0.25) : std::pow(lam, 0.25));
        B.closed_form_ratio[c] = (1.0 / unit_integral) / closed;
    }
    return B;
}

DecayProbeResult green_decay_probe(const TrigPoly& f, int n, double y,
                                   const std::vector<double>& xs,
                                   const std::vector<double>& hbar_list,
                                   int degree) {
    if (hbar_list.size() < 4)
        throw InsufficientRangeError("green_decay_probe: need >= 4 hbar values");
    CircleGrid g(n);
    auto crit = critical_points(f);
    const int expected = static_cast<int>(
        std::count_if(crit.begin(), crit.end(),
                      [&](const CriticalPoint& c) { return c.index == degree; }));

    // narrow bump at y, width fixed across the sweep; kept a few grid
    // spacings wide so the resolvent neighborhood bias w^2/(2 hbar) stays
    // inside the 5% rate tolerance
    const double width = std::max(0.06, 5.0 * g.h);
    Eigen::VectorXd u(n);
    for (int x = 0; x < n; ++x) {
        double d = std::abs(wrap_angle(g.theta(x) - y + kTwoPi / 2) - kTwoPi / 2);
        u[x] = std::exp(-(d * d) / (width * width));
    }

    std::vector<std::vector<std::pair<double, double>>> samples(xs.size());
    for (double hbar : hbar_list) {
        WittenData w(g, f, hbar);
        SpectralData sd = decompose(witten_laplacian(w, degree), hbar);
        if (sd.m_small != expected) continue;  // outside regime: drop
        LinearMap G = green(sd);
        Eigen::VectorXd gu = G.m * u;
        double floor = 1e-12 * gu.lpNorm<Eigen::Infinity>();
        for (size_t p = 0; p < xs.size(); ++p) {
            double val = std::abs(g.interpolate(gu, xs[p]));
            if (val > floor) samples[p].push_back({1.0 / hbar, std::log(val)});
        }
    }

    DecayProbeResult out;
    out.xs = xs;
    for (size_t p = 0; p < xs.size(); ++p) {
        if (samples[p].size() < 4) {
            std::ostringstream os;
            os << "green_decay_probe: only " << samples[p].size()
               << " usable sweep points at x = " << xs[p]
               << " (underflow-dominated); widen the hbar range";
            throw InsufficientRangeError(os.str());
        }
        // least squares log|Gu| = -rate/hbar + p log hbar + c; the
        // prefactor term matters: dropping it biases the rate by O(hbar)
        const int np = static_cast<int>(samples[p].size());
        Eigen::MatrixXd X(np, 3);
        Eigen::VectorXd yv(np);
        for (int r = 0; r < np; ++r) {
            double inv_h = samples[p][r].first;
            X(r, 0) = -inv_h;
            X(r, 1) = -std::log(inv_h);
            X(r, 2) = 1.0;
            yv[r] = samples[p][r].second;
        }
        Eigen::VectorXd beta = X.colPivHouseholderQr().solve(yv);
        out.rate_est.push_back(beta[0]);
        out.agmon_ref.push_back(agmon_distance(f, crit, xs[p], y));
        out.points_used.push_back(static_cast<int>(samples[p].size()));
    }
    return out;
}

RegimeReport validate_regime(const TrigPoly& f, double hbar, int n) {
    RegimeReport rep;
    auto crit = critical_points(f);
    int n0 = static_cast<int>(crit.size()) / 2;
    double err = 0.0;
    bool dims_ok = true;
    std::ostringstream detail;
    int half = n / 2;
    if (half % 2 == 0) ++half;  // keep the coarse grid odd
    for (int degree : {0, 1}) {
        std::vector<double> coarse, fine;
        for (int nn : {half, n}) {
            CircleGrid g(nn);
            WittenData w(g, f, hbar);
            SpectralData sd = decompose(witten_laplacian(w, degree), hbar);
            auto& dst = (nn == n) ? fine : coarse;
            dst.assign(sd.eigs.data(), sd.eigs.data() + sd.m_small);
            if (nn == n) {
                if (degree == 0) rep.gap_ratio_deg0 = sd.gap_ratio;
                else rep.gap_ratio_deg1 = sd.gap_ratio;
            }
        }
        if (coarse.size() != fine.size() || static_cast<int>(fine.size()) != n0) {
            dims_ok = false;
            detail << "degree " << degree << ": small dims " << coarse.size() << "/"
                   << fine.size() << " vs Morse count " << n0 << "; ";
            continue;
        }
        for (size_t s = 0; s < fine.size(); ++s)
            err = std::max(err, std::abs(fine[s] - coarse[s]));
    }
    rep.eig_err_est = err;
    rep.gap_warning = rep.gap_ratio_deg0 <= 10.0 || rep.gap_ratio_deg1 <= 10.0;
    bool res_ok = hbar >= 25.0 * err;
    rep.ok = dims_ok && res_ok;
    if (!dims_ok) detail << "dimension mismatch; ";
    if (rep.gap_warning)
        detail << "gap ratios " << rep.gap_ratio_deg0 << ", " << rep.gap_ratio_deg1
               << " not above 10 (warning); ";
    if (!res_ok)
        detail << "hbar " << hbar << " below 25x eigen-error " << err << "; ";
    rep.detail = detail.str();
    return rep;
}

}  // namespace mwl
