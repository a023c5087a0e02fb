#pragma once

#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "mwl/derham.hpp"
#include "mwl/morse.hpp"

namespace mwl {

// Full symmetric eigendecomposition of one Witten Laplacian, split at the
// small-eigenvalue cutoff hbar^{3/2}.
struct SpectralData {
    int degree = 0;
    double hbar = 0.0;
    double cutoff = 0.0;          // hbar^{3/2}
    Eigen::VectorXd eigs;         // ascending
    Eigen::MatrixXd vecs;         // Euclidean-orthonormal columns
    int m_small = 0;              // # eigenvalues below cutoff
    double first_excluded = 0.0;
    double gap_ratio = 0.0;       // first_excluded / cutoff
};

SpectralData decompose(const LinearMap& delta, double hbar);

// Small-eigenvalue subspace with its orthogonal projector.
struct SmallSubspace {
    int degree = 0;
    double hbar = 0.0;
    std::vector<double> eigenvalues;
    Eigen::MatrixXd basis;  // n x m
    Eigen::MatrixXd P;      // n x n projector
    double first_excluded = 0.0;
    double gap_ratio = 0.0;
    int expected_dim = -1;
    bool gap_warning = false;
    nlohmann::json report() const;  // eigen-report JSON
};

// Filter at hbar^{3/2} and compare against the Morse count. A dimension
// mismatch throws RegimeError (hbar too large or n too small); a gap ratio
// below 10 only sets gap_warning.
SmallSubspace small_spectrum(const SpectralData& sd, int expected_dim);
SmallSubspace small_spectrum(const LinearMap& delta, double hbar, int expected_dim);

LinearMap projector(const SpectralData& sd);
// Projected Green operator: pseudo-inverse of Δ on the excluded spectrum,
// G·Δ = Δ·G = I - P, G·P = 0. Throws ConditioningError when the first
// excluded eigenvalue is below 1e-12 · ||Δ||.
LinearMap green(const SpectralData& sd);

// Homotopy package for one function difference: H = d* G (degree 1 -> 0).
// The identity dH + Hd = I - P is verified in both degrees; residuals
// beyond 1e-6 throw AssemblyError.
struct HomotopyData {
    LinearMap P0, P1;  // projectors per degree
    LinearMap G0, G1;  // projected Green operators per degree
    LinearMap H;       // degree 1 -> 0
    double residual_deg0 = 0.0;
    double residual_deg1 = 0.0;
};

HomotopyData homotopy(const WittenData& w, const SpectralData& s0,
                      const SpectralData& s1);

// Critical-point-indexed eigenform basis. Each column is the small-
// subspace vector localized at one critical point of matching index,
// signed to agree with the counterclockwise orientation of the unstable
// set and normalized so that the discrete unstable-manifold integral
//   ∫_{V_q^-} e^{(f - f(q))/hbar} φ_q = 1
// holds exactly (point evaluation in degree 0).
struct EigenformBasis {
    int degree = 0;
    double hbar = 0.0;
    std::vector<CriticalPoint> points;      // matching-index criticals, θ-sorted
    Eigen::MatrixXd phis;                   // n x m
    std::vector<double> norm_sq;            // h-weighted L² norms squared
    std::vector<double> closed_form_ratio;  // integral vs closed-form constant
    int find(const CriticalPoint& q) const; // column of the point nearest q
};

EigenformBasis phi_map(const SmallSubspace& S, const TrigPoly& f,
                       const std::vector<CriticalPoint>& criticals,
                       const WittenData& w);

// Agmon-ball decay probe for the Green kernel: place a narrow bump at y,
// sweep hbar, and fit log|G u|(x) against -ρ(x,y)/hbar per probe point.
struct DecayProbeResult {
    std::vector<double> xs;
    std::vector<double> rate_est;   // fitted decay rates
    std::vector<double> agmon_ref;  // ρ(x, y)
    std::vector<int> points_used;
};

DecayProbeResult green_decay_probe(const TrigPoly& f, int n, double y,
                                   const std::vector<double>& xs,
                                   const std::vector<double>& hbar_list,
                                   int degree = 1);

// Semiclassical-regime validation: grid-resolution eigenvalue error from
// an n vs n/2 comparison, plus the spectral-gap requirement.
struct RegimeReport {
    bool ok = false;           // dimension counts and resolution rule hold
    bool gap_warning = false;  // some gap ratio at or below 10
    double eig_err_est = 0.0;
    double gap_ratio_deg0 = 0.0;
    double gap_ratio_deg1 = 0.0;
    std::string detail;
};

RegimeReport validate_regime(const TrigPoly& f, double hbar, int n);

}  // namespace mwl
