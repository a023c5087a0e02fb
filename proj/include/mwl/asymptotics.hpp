#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace mwl {

// Three-parameter fit log|v| = -A/hbar + p log hbar + c.
struct FitResult {
    double A = 0.0, A_err = 0.0;
    double p = 0.0, p_err = 0.0;
    double c = 0.0, c_err = 0.0;
    double coeff = 0.0;  // e^c
    double max_abs_residual = 0.0;  // in log units
    int n_points = 0;
};

// Least squares over (hbar, log|v|) pairs. Throws InsufficientRangeError
// for fewer than 5 points and ConditioningError when the design matrix
// condition number exceeds 1e6 (hbar range too narrow).
FitResult fit_log_asymptotics(const std::vector<std::pair<double, double>>& pts);

// One evaluated sweep point.
struct SweepPoint {
    double hbar = 0.0;
    bool valid = false;
    std::string flag;  // reason when dropped
    double log_abs = 0.0;
    int sign = 0;
    double noise_est = 0.0;
    bool gap_warning = false;
    std::vector<double> tree_log_abs;  // per topology, only when valid per tree
    std::vector<int> tree_sign;
    std::vector<bool> tree_valid;
};

// Sweep data plus the Morse-side references the theorem is checked against.
struct SweepResult {
    int k = 0;
    std::vector<SweepPoint> points;       // ordered by decreasing hbar
    double action_ref = 0.0;              // A(q⃗)
    int count_ref = 0;                    // total signed count
    int topologies = 0;
    std::vector<int> tree_count;          // signed count per topology
    std::vector<double> tree_length_min;  // min of the length functional per topology
    nlohmann::json to_json() const;
    std::string to_csv() const;  // columns: k, hbar, log_abs_pairing, sign, topology_id
};

// Verdict on the asymptotic identity for one critical tuple.
struct TheoremVerdict {
    bool issued = false;   // enough valid points and finite errors
    bool pass = false;
    bool pass_A = false, pass_p = false, pass_coeff = false, pass_sign = false;
    FitResult fit;
    double tol_A = 0.05, tol_p = 0.2;
    double A_ref = 0.0;
    int count_ref = 0, coeff_rounded = 0;
    int sweep_sign = 0;
    std::string detail;
    nlohmann::json to_json() const;
};

// PASS iff |A_est - A|/A < tol_A, |p_est - (2-k)| < tol_p, the rounded
// signed coefficient equals the Morse count, and the sweep sign is stable.
// When no rigid tree exists (count 0) the check becomes the localization
// statement: the fitted exponent must exceed A by at least 3 standard
// errors.
TheoremVerdict verify_theorem(const SweepResult& s, double tol_A = 0.05,
                              double tol_p = 0.2);

}  // namespace mwl
