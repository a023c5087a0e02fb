#include "mwl/asymptotics.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "mwl/errors.hpp"

namespace mwl {

FitResult fit_log_asymptotics(const std::vector<std::pair<double, double>>& pts) {
    const int n = static_cast<int>(pts.size());
    if (n < 5)
        throw InsufficientRangeError(
            "fit_log_asymptotics: need at least 5 sweep points");
    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd y(n);
    for (int r = 0; r < n; ++r) {
        X(r, 0) = -1.0 / pts[r].first;
        X(r, 1) = std::log(pts[r].first);
        X(r, 2) = 1.0;
        y[r] = pts[r].second;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double cond = svd.singularValues()(0) / svd.singularValues()(2);
    if (cond > 1e6)
        throw ConditioningError(
            "fit_log_asymptotics: design matrix condition number above 1e6; "
            "widen the hbar range");
    Eigen::VectorXd beta = svd.solve(y);
    Eigen::VectorXd resid = y - X * beta;
    double sigma2 = (n > 3) ? resid.squaredNorm() / (n - 3) : 0.0;
    Eigen::MatrixXd cov = sigma2 * (X.transpose() * X).inverse();
    FitResult f;
    f.A = beta[0];
    f.p = beta[1];
    f.c = beta[2];
    f.A_err = std::sqrt(std::max(0.0, cov(0, 0)));
    f.p_err = std::sqrt(std::max(0.0, cov(1, 1)));
    f.c_err = std::sqrt(std::max(0.0, cov(2, 2)));
    f.coeff = std::exp(f.c);
    f.max_abs_residual = resid.lpNorm<Eigen::Infinity>();
    f.n_points = n;
    return f;
}

nlohmann::json SweepResult::to_json() const {
    nlohmann::json jp = nlohmann::json::array();
    for (const auto& p : points) {
        nlohmann::json j{{"hbar", p.hbar},
                         {"valid", p.valid},
                         {"log_abs", p.log_abs},
                         {"sign", p.sign},
                         {"noise_est", p.noise_est},
                         {"gap_warning", p.gap_warning}};
        if (!p.flag.empty()) j["flag"] = p.flag;
        nlohmann::json trees = nlohmann::json::array();
        for (size_t t = 0; t < p.tree_log_abs.size(); ++t)
            trees.push_back({{"topology_id", t},
                             {"log_abs", p.tree_log_abs[t]},
                             {"sign", p.tree_sign[t]},
                             {"valid", static_cast<bool>(p.tree_valid[t])}});
        j["per_tree"] = trees;
        jp.push_back(j);
    }
    return nlohmann::json{{"k", k},
                          {"points", jp},
                          {"action_ref", action_ref},
                          {"count_ref", count_ref},
                          {"tree_count", tree_count},
                          {"tree_length_min", tree_length_min}};
}

std::string SweepResult::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "k,hbar,log_abs_pairing,sign,topology_id\n";
    for (const auto& p : points) {
        if (!p.valid) continue;
        os << k << "," << p.hbar << "," << p.log_abs << "," << p.sign << ",\n";
        for (size_t t = 0; t < p.tree_log_abs.size(); ++t)
            if (p.tree_valid[t])
                os << k << "," << p.hbar << "," << p.tree_log_abs[t] << ","
                   << p.tree_sign[t] << "," << t << "\n";
    }
    return os.str();
}

nlohmann::json TheoremVerdict::to_json() const {
    return nlohmann::json{{"issued", issued},
                          {"pass", pass},
                          {"pass_A", pass_A},
                          {"pass_power", pass_p},
                          {"pass_coeff", pass_coeff},
                          {"pass_sign", pass_sign},
                          {"A_est", fit.A},
                          {"A_err", fit.A_err},
                          {"power_est", fit.p},
                          {"power_err", fit.p_err},
                          {"coeff_est", fit.coeff},
                          {"coeff_rounded", coeff_rounded},
                          {"A_ref", A_ref},
                          {"count_ref", count_ref},
                          {"sweep_sign", sweep_sign},
                          {"tol_A", tol_A},
                          {"tol_p", tol_p},
                          {"max_abs_residual", fit.max_abs_residual},
                          {"n_points", fit.n_points},
                          {"detail", detail}};
}

TheoremVerdict verify_theorem(const SweepResult& s, double tol_A, double tol_p) {
    TheoremVerdict v;
    v.tol_A = tol_A;
    v.tol_p = tol_p;
    v.A_ref = s.action_ref;
    v.count_ref = s.count_ref;

    std::vector<std::pair<double, double>> pts;
    int sign = 0;
    bool sign_stable = true;
    for (const auto& p : s.points) {
        if (!p.valid) continue;
        pts.push_back({p.hbar, p.log_abs});
        if (p.sign != 0) {
            if (sign == 0) sign = p.sign;
            else if (sign != p.sign) sign_stable = false;
        }
    }
    v.sweep_sign = sign_stable ? sign : 0;
    std::ostringstream detail;
    if (pts.size() < 5) {
        v.issued = false;
        detail << "only " << pts.size() << " valid sweep points; verdict refused";
        v.detail = detail.str();
        return v;
    }
    v.fit = fit_log_asymptotics(pts);
    v.issued = true;

    const int k = s.k;
    if (s.count_ref != 0) {
        v.pass_A = std::abs(v.fit.A - s.action_ref) < tol_A * std::abs(s.action_ref);
        v.pass_p = std::abs(v.fit.p - (2.0 - k)) < tol_p;
        double signed_coeff = v.fit.coeff * (sign == 0 ? 1 : sign);
        v.coeff_rounded = static_cast<int>(std::lround(signed_coeff));
        v.pass_coeff =
            static_cast<int>(std::lround(v.fit.coeff)) == std::abs(s.count_ref);
        v.pass_sign = sign_stable && v.coeff_rounded == s.count_ref;
        v.pass = v.pass_A && v.pass_p && v.pass_coeff && v.pass_sign;
        detail << "A " << v.fit.A << " vs " << s.action_ref << "; p " << v.fit.p
               << " vs " << (2.0 - k) << "; coeff " << v.fit.coeff << " vs |"
               << s.count_ref << "|; sign " << v.sweep_sign;
    } else {
        // localization: without rigid trees the pairing must decay strictly
        // faster than e^{-A/hbar}
        v.pass_A = v.fit.A > s.action_ref + 3.0 * v.fit.A_err;
        v.pass_p = true;
        v.pass_coeff = true;
        v.pass_sign = true;
        v.coeff_rounded = 0;
        v.pass = v.pass_A;
        detail << "no rigid tree: fitted exponent " << v.fit.A << " must exceed "
               << s.action_ref << " by 3 x " << v.fit.A_err;
    }
    v.detail = detail.str();
    return v;
}

}  // namespace mwl
