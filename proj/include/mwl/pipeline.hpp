#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mwl/ainfty.hpp"
#include "mwl/asymptotics.hpp"
#include "mwl/gradient_trees.hpp"
#include "mwl/spectral.hpp"

namespace mwl {

// One theorem experiment: a Morse sequence with a chosen critical tuple.
struct ProductExperiment {
    std::vector<TrigPoly> fs;  // f_0 .. f_k
    std::vector<CriticalPoint> q_in;
    CriticalPoint q_out;
    int n = 513;
    double margin = 1e-4;
    int k() const { return static_cast<int>(fs.size()) - 1; }
};

// Tree products evaluated at one hbar, with first-order roundoff-floor
// propagation for the pairing values.
struct ProductPoint {
    double hbar = 0.0;
    double pairing = 0.0;  // ⟨m_k(φ(q⃗)), φ(q_out)/||φ(q_out)||²⟩
    double noise_est = 0.0;
    std::vector<double> tree_pairing;
    std::vector<double> tree_noise;
    bool gap_warning = false;
    double homotopy_residual = 0.0;
    double norm_out_sq = 0.0;
    nlohmann::json to_json(const ProductExperiment& ex) const;
};

ProductPoint evaluate_product(const ProductExperiment& ex, double hbar);

// Sweep over hbar values (decreasing order recommended); points outside
// the validated regime or below the noise floor are dropped and flagged.
SweepResult hbar_sweep(const ProductExperiment& ex,
                       const std::vector<double>& hbars);

// Full spectral dg category over a function chain (every ordered pair,
// both degrees), for A-infinity relation checks on spectral retracts.
struct SpectralCategory {
    DgCategory cat;
    double max_homotopy_residual = 0.0;
    bool gap_warning = false;
};
SpectralCategory build_spectral_category(const std::vector<TrigPoly>& fs, int n,
                                         double hbar);

// Leading-order amplification of the homotopy operator across the
// populated internal edge of a k = 3 experiment:
//   H_ij(χ_S · ξ_S)(x_root) ≈ (1/hbar) ∫ χ_S ξ_S dθ.
struct EdgeAmplification {
    double lhs = 0.0;    // H value at the root vertex
    double rhs = 0.0;    // (1/hbar) × source integral
    double ratio = 0.0;  // lhs / rhs, -> 1 as hbar -> 0
    double vertex = 0.0, root = 0.0;
    int topology_id = -1;
};
EdgeAmplification homotopy_amplification_check(const ProductExperiment& ex,
                                               double hbar);

}  // namespace mwl
