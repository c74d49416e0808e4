#pragma once

// Estimate ledgers evaluated along trajectories, interpolation-inequality
// audits, and the per-step diagnostics record.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "micropol/auxiliary.hpp"
#include "micropol/grid.hpp"
#include "micropol/micropolar.hpp"
#include "micropol/norms.hpp"

namespace micropol {

struct DiagnosticsRecord {
    double t = 0.0;
    double l2_u = 0.0;
    double h1_u = 0.0;
    double l2_w = 0.0;
    double l4_w = 0.0;
    double linf_w = 0.0;
    double l4_grad_w = 0.0;
    double h1_v = 0.0;
    double h1_g = 0.0;
    double l2_lap_g = 0.0;
    double energy_lhs = 0.0;
    double energy_rhs = 0.0;
    double energy_defect = 0.0;
    double l4_ledger_lhs = 0.0;
    double l4_ledger_rhs = 0.0;
    double l4_ledger_defect = 0.0;
    double g_residual = 0.0;
    double vt_residual = 0.0;
    double gronwall_envelope_a1 = 0.0;
    double gronwall_envelope_a2 = 0.0;

    static const std::vector<std::string>& field_names();
    [[nodiscard]] std::vector<double> values() const;
};

/// One side-by-side evaluation of an integral identity over a step.
/// `scale` is the sum of the magnitudes of the left-hand terms and sets the
/// yardstick for relative defects.
struct LedgerTerms {
    double lhs = 0.0;
    double rhs = 0.0;
    double defect = 0.0;
    double scale = 0.0;
};

/// d/dt (|u|^2 + |w|^2)/2 + (nu + kappa) |grad u|^2 + 4 kappa |w|^2 = 4 kappa <perp_div u, w>,
/// with time levels matching the scheme: viscous and u-coupling terms at the
/// new velocity, damping and w-coupling terms averaged over the step.
LedgerTerms energy_ledger(const SimState& before, const SimState& after, const FluidParams& params, double dt);

/// (1/4) d/dt |w|_4^4 + 4 kappa |w|_4^4 = 2 kappa <perp_div u, w^3>.
LedgerTerms l4_ledger(const SimState& before, const SimState& after, const FluidParams& params, double dt);

/// Norms of one state used by the post-run ledgers.
struct StateSample {
    double t = 0.0;
    double l2_u = 0.0;
    double grad_u_l2 = 0.0;
    double grad_u_inf = 0.0;      ///< pointwise Frobenius maximum, cell centred
    double grad_curl_u_4 = 0.0;   ///< |grad perp_div u|_4
    std::array<double, 4> w_q{};  ///< |w|_q for q = 2, 4, 8, inf
    std::array<double, 4> curl_q{};
    double grad_w_4 = 0.0;
    double grad_g_l2 = 0.0;
    double lap_g_l2 = 0.0;
    double g_w2q = 0.0;           ///< discrete W^{2,4} norm of g
};

inline constexpr std::array<double, 4> kLedgerExponents{2.0, 4.0, 8.0, INFINITY};

StateSample sample_state(const SimState& state, const AuxFields& aux);

/// Violations of the one-step integrated form of
///   d/dt |w|_q + 4 kappa |w|_q <= 2 kappa |perp_div u|_q
/// and of the Gronwall majorant built from it.
struct LpLedgerReport {
    double q = 2.0;
    int steps = 0;
    int violations = 0;           ///< per-step inequality
    int majorant_violations = 0;  ///< |w|_q(t) above the integrated majorant
    double max_excess = 0.0;      ///< largest relative per-step excess (negative when slack)
    double final_majorant = 0.0;
};

/// `q_index` selects from kLedgerExponents. A step is a violation when the
/// excess exceeds rel_tol times the start-of-step norm.
LpLedgerReport lp_linf_ledger(const std::vector<StateSample>& samples, const FluidParams& params, int q_index,
                              double rel_tol);

/// d/dt |grad w|_4 + 4 kappa |grad w|_4 <= |grad u|_inf |grad w|_4 + 2 kappa |grad perp_div u|_4,
/// plus the log-Gronwall envelope
///   ln(e + |grad w|_4)(t) <= ln(e + |grad w_0|_4) exp(C int phi),
///   phi = (1 + |w|_inf)(1 + |g|_{W^{2,4}}),
/// with C the largest per-step rate.
struct GradWLedgerReport {
    int steps = 0;
    int violations = 0;
    int envelope_violations = 0;
    double max_excess = 0.0;
    double fitted_rate = 0.0;
    double max_grad_w = 0.0;
    std::vector<double> envelope;
};

GradWLedgerReport gradw_ledger(const std::vector<StateSample>& samples, const FluidParams& params, double rel_tol);

/// Constant of the L2 envelope A1(t) = exp(C t)(|u0|^2 + |w0|^2) obtained from
/// Young's inequality applied to the energy identity:
/// max(0, 8 kappa^2 / (nu + kappa) - 8 kappa), which is zero for every nu > 0,
/// so the envelope is the initial energy.
double energy_growth_constant(const FluidParams& params);

/// Rate of A2: the largest per-step value of
///   [dZ/dt + (nu + kappa) |Lap g|^2 + 8 kappa |w|_4^2] / ((1 + |u|^2 |grad u|^2) Z),
///   Z = |grad g|^2 + |w|_4^2,
/// over the samples (zero if never positive).
double fit_a2_rate(const std::vector<StateSample>& samples, const FluidParams& params);

struct GronwallConstants {
    double c_a1 = 0.0;
    double c_a2 = 0.0;
    double tol = 1e-3;  ///< relative slack allowed before flagging
};

struct GronwallReport {
    std::vector<double> t;
    std::vector<double> energy;       ///< |u|^2 + |w|^2
    std::vector<double> envelope_a1;
    std::vector<double> a2_quantity;  ///< Z plus the integrated dissipation
    std::vector<double> envelope_a2;
    int violations_a1 = 0;
    int violations_a2 = 0;
};

GronwallReport gronwall_envelopes(const std::vector<StateSample>& samples, const FluidParams& params,
                                  const GronwallConstants& constants);

/// Streams a run: one record for the initial state and one per step.
/// A2 uses the rate fitted over the steps seen so far.
class DiagnosticsEngine {
public:
    DiagnosticsEngine(const SimState& initial, const FluidParams& params, double tol = 1e-9);

    [[nodiscard]] const DiagnosticsRecord& initial_record() const { return initial_record_; }
    DiagnosticsRecord observe(const SimState& before, const SimState& after, double dt);

    [[nodiscard]] const std::vector<StateSample>& samples() const { return samples_; }
    [[nodiscard]] const FluidParams& params() const { return params_; }
    [[nodiscard]] const LedgerTerms& last_energy() const { return energy_; }
    [[nodiscard]] const LedgerTerms& last_l4() const { return l4_; }
    [[nodiscard]] double a2_rate() const { return a2_rate_; }

private:
    DiagnosticsRecord record_for(const SimState& state, const AuxFields& aux, const StateSample& s) const;

    FluidParams params_;
    double tol_;
    AuxFields aux_;
    std::vector<StateSample> samples_;
    DiagnosticsRecord initial_record_;
    LedgerTerms energy_;
    LedgerTerms l4_;
    double energy0_ = 0.0;
    double z0_ = 0.0;
    double a2_rate_ = 0.0;
    double a2_exponent_ = 0.0;
};

/// Smooth fields vanishing on the wall:
///   f = sum_{k,l <= max_mode} a_kl sin(k pi x / lx) sin(l pi y / ly),
/// a_kl normal with standard deviation 1 / (k^2 + l^2). Coefficients depend
/// only on the seed, so the same ensemble can be sampled on several grids.
std::vector<ScalarField> band_limited_ensemble(const GridSpec& g, int count, int max_mode, std::uint64_t seed);

/// Largest ratio LHS / (RHS with C = 1) over an ensemble for each of
///   (1) |f|_4      vs |f|_2^{1/2} |grad f|_2^{1/2} + |f|_2
///   (2) |grad f|_4 vs |f|_2^{1/4} |D^2 f|_2^{3/4} + |f|_2
///   (3) |f|_inf    vs |f|_2^{1/2} |D^2 f|_2^{1/2} + |f|_2
///   (4) |f|_inf    vs |f|_2^{2/3} |D^3 f|_2^{1/3} + |f|_2
struct GnAuditRow {
    int item = 0;
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
};

std::array<double, 4> gn_ratios(const ScalarField& f);
std::vector<GnAuditRow> gn_audit(const std::vector<ScalarField>& ensemble);

}  // namespace micropol
