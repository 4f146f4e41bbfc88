#ifndef NULLWAVE_ENERGY_HPP
#define NULLWAVE_ENERGY_HPP

#include <optional>
#include <vector>

#include "nullwave/geometry.hpp"
#include "nullwave/grid.hpp"
#include "nullwave/nullform.hpp"
#include "nullwave/state.hpp"

// Weighted energies on slices and null curves.
//
// With Lam(u) = (1+u^2)^(1+delta), Lamb(ubar) likewise, and k-th commuted
// fields d_x^k p, d_x^k q, the slice energy and flux are
//
//   E_k(t) = int Lam(u) |d_x^k q|^2 + Lamb(ubar) |d_x^k p|^2 dx
//   F_k(t) = sup_ubar int_{Cbar_ubar} Lam(u) |d_x^k q|^2 dt
//          + sup_u    int_{C_u}       Lamb(ubar) |d_x^k p|^2 dt
//
// summed over fields.  Curves are the lattice diagonals, the curve measure is
// dt, every curve starts on the initial slice, and all quadrature is
// trapezoidal, so F(0) = 0 and both sups are nondecreasing in t.

namespace nullwave {

struct EnergyReport {
    double t = 0.0;
    double e0 = 0.0, e1 = 0.0;
    double f0 = 0.0, f1 = 0.0;
    double f0_ubar_side = 0.0, f1_ubar_side = 0.0;  // sup over Cbar curves only
    double e_total = 0.0, f_total = 0.0;
    double ratio = 0.0;  // (e_total + f_total) / E(0); 0 for identically zero data

    double sup_wL = 0.0;     // sup Lamb^{1/2} |p|
    double sup_wLbar = 0.0;  // sup Lam^{1/2} |q|

    // Mixed weight Lam^{1/2}/Lamb^{1/4} on q (and mirrored on p): sup and the
    // L2 pair ||W g||_2 + ||W d_x g||_2 feeding the pointwise-from-L2 bound.
    double mixed_sup = 0.0;
    double mixed_sup_q = 0.0, mixed_l2_q = 0.0;
    double mixed_sup_p = 0.0, mixed_l2_p = 0.0;

    double st0 = 0.0, st1 = 0.0;  // running int int Lam(u)|d_x^k q|^2 / Lamb^{1/2}
};

/// Second-order spatial derivative of one field array (centered inside,
/// one-sided at the ends).
void spatial_derivative(const std::vector<double>& f, double h, std::vector<double>& out);

/// E_k(t) for k in {0, 1}.
double slice_energy(const CharacteristicState& s, const Grid& g, const WeightSpec& w, int k);

/// Trapezoidal flux integrals along every lattice diagonal.
///
/// Diagonal ids: ubar-side d = step + j, u-side d = step - j + (m-1).  prime()
/// records the initial slice; update() is called once per accepted step and
/// adds one trapezoid panel per diagonal.  Diagonals first touched later
/// (entering through a boundary corner) start accumulating from that point.
class FluxAccumulators {
public:
    FluxAccumulators(const Grid& g, const WeightSpec& w, long long max_steps);

    void prime(const CharacteristicState& s);
    void update(const CharacteristicState& s);

    double sup(int k) const;
    double side_sup_ubar(int k) const;  // sup over Cbar curves only
    double side_sup_u(int k) const;
    double value_ubar(int k, long long diagonal) const;

private:
    void touch(const CharacteristicState& s, bool accumulate);

    Grid grid_;
    WeightSpec w_;
    std::vector<double> acc_ub_[2], acc_u_[2];
    std::vector<double> prev_ub_[2], prev_u_[2];
    std::vector<char> seen_ub_, seen_u_;
    std::vector<double> work_dp_, work_dq_, row_ub_[2], row_u_[2];
    // Weights per diagonal id (bit-identical along each characteristic, and
    // evaluated once per run instead of once per step).
    std::vector<double> lam_u_, lamb_ub_;
};

/// Running spacetime integrals int int Lam(u) |d_x^k q|^2 Lamb(ubar)^{-1/2},
/// one slice quadrature times dt per accepted step.
class SpacetimeAccumulator {
public:
    SpacetimeAccumulator(const Grid& g, const WeightSpec& w, long long max_steps);
    void update(const CharacteristicState& s);
    double value(int k) const { return st_[k]; }

private:
    Grid grid_;
    WeightSpec w_;
    double st_[2] = {0.0, 0.0};
    std::vector<double> work_dq_, work_row_;
    std::vector<double> lam_u_, damp_ub_;  // per-diagonal weight tables
};

/// int Lamb(ubar)^{-1/2} d ubar over the line, for the Fubini-style bound
/// st_k <= 2 * side_sup_ubar(k) * this.
double inverse_sqrt_weight_integral(const WeightSpec& w);

struct PointwiseDiagnostics {
    double sup_wL = 0.0;
    double sup_wLbar = 0.0;
};

PointwiseDiagnostics pointwise_diagnostics(const CharacteristicState& s, const Grid& g,
                                           const WeightSpec& w);

struct MixedDiagnostics {
    double sup_q = 0.0, l2_pair_q = 0.0;
    double sup_p = 0.0, l2_pair_p = 0.0;
};

MixedDiagnostics mixed_weight_diagnostics(const CharacteristicState& s, const Grid& g,
                                          const WeightSpec& w);

/// Everything a cadence tick records.  flux/st may be null at t = 0.
EnergyReport make_report(const CharacteristicState& s, const Grid& g, const WeightSpec& w,
                         const FluxAccumulators* flux, const SpacetimeAccumulator* st,
                         double e_initial);

struct MonitorResult {
    bool passed = true;
    bool vacuous = false;                  // identically zero data
    double max_ratio = 0.0;
    std::optional<double> first_violation_t;
};

/// Checks (E+F)/E(0) <= threshold over a run's reports.  Zero initial energy
/// with zero later energy passes vacuously; zero initial energy with growth
/// throws DegenerateDataError.
MonitorResult bootstrap_monitor(const std::vector<EnergyReport>& reports, double threshold);

/// Discrete balance on one fixed pair of null curves: integrating
/// L(Lam q^2) = 2 Lam q N over the region left of Cbar_{ubar0} gives
///
///   1/2 int_{slice t, x <= 2 ubar0 - t} Lam q^2 + int_{Cbar} Lam q^2 dt
///     = 1/2 int_{slice 0} Lam q^2 + int int Lam q N
///
/// and the mirrored identity right of C_{u0} with u0 = ubar0.  residual()
/// returns |q-side defect| + |p-side defect|, each summed over fields.
class IdentityAccumulator {
public:
    IdentityAccumulator(const Grid& g, const WeightSpec& w, double ubar0, long long max_steps);

    void prime(const CharacteristicState& s, const NonlinearitySpec& spec);
    void feed(const CharacteristicState& next, const NonlinearitySpec& spec);

    struct Result {
        double q_side = 0.0;
        double p_side = 0.0;
        double total_abs() const;
    };
    Result residual(const CharacteristicState& final_state) const;

    long long diagonal_ubar() const { return d2_0_; }

private:
    double slice_q(const CharacteristicState& s, int j_hi) const;
    double slice_p(const CharacteristicState& s, int j_lo) const;
    double volume_q(const CharacteristicState& s, const NonlinearitySpec& spec, int j_hi) const;
    double volume_p(const CharacteristicState& s, const NonlinearitySpec& spec, int j_lo) const;
    double curve_q_value(const CharacteristicState& s, int j) const;
    double curve_p_value(const CharacteristicState& s, int j) const;

    Grid grid_;
    WeightSpec w_;
    long long d2_0_ = 0;  // ubar diagonal: step + j
    long long d1_0_ = 0;  // u diagonal: step - j
    double slice0_q_ = 0.0, slice0_p_ = 0.0;
    double curve_q_ = 0.0, curve_p_ = 0.0;
    double vol_q_ = 0.0, vol_p_ = 0.0;
    double prev_curve_q_ = 0.0, prev_curve_p_ = 0.0;
    double prev_vol_q_ = 0.0, prev_vol_p_ = 0.0;
    mutable std::vector<double> nwork_p_, nwork_q_, nwork_n_;
};

} // namespace nullwave

#endif
