#include "nullwave/energy.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "nullwave/errors.hpp"

namespace nullwave {

namespace {

double trapezoid(const std::vector<double>& f, double h, int j_lo, int j_hi) {
    if (j_hi <= j_lo) return 0.0;
    double s = 0.5 * (f[j_lo] + f[j_hi]);
    for (int j = j_lo + 1; j < j_hi; ++j) s += f[j];
    return s * h;
}

double trapezoid(const std::vector<double>& f, double h) {
    return trapezoid(f, h, 0, static_cast<int>(f.size()) - 1);
}

} // namespace

void spatial_derivative(const std::vector<double>& f, double h, std::vector<double>& out) {
    int m = static_cast<int>(f.size());
    out.resize(f.size());
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    for (int j = 1; j + 1 < m; ++j) out[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
    out[m - 1] = (3.0 * f[m - 1] - 4.0 * f[m - 2] + f[m - 3]) / (2.0 * h);
}

double slice_energy(const CharacteristicState& s, const Grid& g, const WeightSpec& w, int k) {
    int m = s.m;
    double h = g.h();
    std::vector<double> row(m, 0.0), work;
    for (int i = 0; i < s.n_fields(); ++i) {
        const std::vector<double>* qv = &s.q[i];
        const std::vector<double>* pv = &s.p[i];
        std::vector<double> dq, dp;
        if (k == 1) {
            spatial_derivative(s.q[i], h, dq);
            spatial_derivative(s.p[i], h, dp);
            qv = &dq;
            pv = &dp;
        }
        for (int j = 0; j < m; ++j) {
            double lam = w.value(g.u_at(s.step, j));
            double lamb = w.value(g.ubar_at(s.step, j));
            row[j] += lam * (*qv)[j] * (*qv)[j] + lamb * (*pv)[j] * (*pv)[j];
        }
    }
    return trapezoid(row, h);
}

namespace {

// u at diagonal id d1 = step - j + (m-1); ubar at d2 = step + j.  The same
// arithmetic as Grid::u_at / Grid::ubar_at so table entries are bit-identical
// to direct evaluation.
double u_of_diagonal(const Grid& g, long long d1_id) {
    return 0.5 * (static_cast<double>(d1_id - (g.m - 1)) * g.h() - g.x_min);
}
double ubar_of_diagonal(const Grid& g, long long d2_id) {
    return 0.5 * (static_cast<double>(d2_id) * g.h() + g.x_min);
}

} // namespace

FluxAccumulators::FluxAccumulators(const Grid& g, const WeightSpec& w, long long max_steps)
    : grid_(g), w_(w) {
    size_t n = static_cast<size_t>(g.m) + static_cast<size_t>(max_steps < 0 ? 0 : max_steps);
    for (int k = 0; k < 2; ++k) {
        acc_ub_[k].assign(n, 0.0);
        acc_u_[k].assign(n, 0.0);
        prev_ub_[k].assign(n, 0.0);
        prev_u_[k].assign(n, 0.0);
        row_ub_[k].assign(g.m, 0.0);
        row_u_[k].assign(g.m, 0.0);
    }
    seen_ub_.assign(n, 0);
    seen_u_.assign(n, 0);
    lam_u_.resize(n);
    lamb_ub_.resize(n);
    for (size_t d = 0; d < n; ++d) {
        lam_u_[d] = w_.value(u_of_diagonal(g, static_cast<long long>(d)));
        lamb_ub_[d] = w_.value(ubar_of_diagonal(g, static_cast<long long>(d)));
    }
}

void FluxAccumulators::prime(const CharacteristicState& s) { touch(s, false); }
void FluxAccumulators::update(const CharacteristicState& s) { touch(s, true); }

void FluxAccumulators::touch(const CharacteristicState& s, bool accumulate) {
    int m = s.m;
    double h = grid_.h();
    long long st = s.step;

    for (int k = 0; k < 2; ++k) {
        std::fill(row_ub_[k].begin(), row_ub_[k].end(), 0.0);
        std::fill(row_u_[k].begin(), row_u_[k].end(), 0.0);
    }
    for (int i = 0; i < s.n_fields(); ++i) {
        spatial_derivative(s.q[i], h, work_dq_);
        spatial_derivative(s.p[i], h, work_dp_);
        for (int j = 0; j < m; ++j) {
            row_ub_[0][j] += s.q[i][j] * s.q[i][j];
            row_ub_[1][j] += work_dq_[j] * work_dq_[j];
            row_u_[0][j] += s.p[i][j] * s.p[i][j];
            row_u_[1][j] += work_dp_[j] * work_dp_[j];
        }
    }
    for (int j = 0; j < m; ++j) {
        size_t d2 = static_cast<size_t>(st + j);
        size_t d1 = static_cast<size_t>(st - j + (m - 1));
        double lam = lam_u_[d1];
        double lamb = lamb_ub_[d2];
        for (int k = 0; k < 2; ++k) {
            double f_ub = lam * row_ub_[k][j];
            double f_u = lamb * row_u_[k][j];
            if (accumulate && seen_ub_[d2])
                acc_ub_[k][d2] += 0.5 * h * (prev_ub_[k][d2] + f_ub);
            if (accumulate && seen_u_[d1])
                acc_u_[k][d1] += 0.5 * h * (prev_u_[k][d1] + f_u);
            prev_ub_[k][d2] = f_ub;
            prev_u_[k][d1] = f_u;
        }
        seen_ub_[d2] = 1;
        seen_u_[d1] = 1;
    }
}

double FluxAccumulators::sup(int k) const {
    return side_sup_ubar(k) + side_sup_u(k);
}

double FluxAccumulators::side_sup_ubar(int k) const {
    return *std::max_element(acc_ub_[k].begin(), acc_ub_[k].end());
}

double FluxAccumulators::side_sup_u(int k) const {
    return *std::max_element(acc_u_[k].begin(), acc_u_[k].end());
}

double FluxAccumulators::value_ubar(int k, long long diagonal) const {
    return acc_ub_[k].at(static_cast<size_t>(diagonal));
}

SpacetimeAccumulator::SpacetimeAccumulator(const Grid& g, const WeightSpec& w,
                                           long long max_steps)
    : grid_(g), w_(w) {
    size_t n = static_cast<size_t>(g.m) + static_cast<size_t>(max_steps < 0 ? 0 : max_steps);
    lam_u_.resize(n);
    damp_ub_.resize(n);
    for (size_t d = 0; d < n; ++d) {
        lam_u_[d] = w_.value(u_of_diagonal(g, static_cast<long long>(d)));
        damp_ub_[d] = w_.pow_value(ubar_of_diagonal(g, static_cast<long long>(d)), -0.5);
    }
}

void SpacetimeAccumulator::update(const CharacteristicState& s) {
    int m = s.m;
    double h = grid_.h();
    for (int k = 0; k < 2; ++k) {
        work_row_.assign(m, 0.0);
        for (int i = 0; i < s.n_fields(); ++i) {
            const std::vector<double>* qv = &s.q[i];
            if (k == 1) {
                spatial_derivative(s.q[i], h, work_dq_);
                qv = &work_dq_;
            }
            for (int j = 0; j < m; ++j) work_row_[j] += (*qv)[j] * (*qv)[j];
        }
        for (int j = 0; j < m; ++j) {
            size_t d1 = static_cast<size_t>(s.step - j + (m - 1));
            size_t d2 = static_cast<size_t>(s.step + j);
            work_row_[j] *= lam_u_[d1] * damp_ub_[d2];
        }
        st_[k] += h * trapezoid(work_row_, h);
    }
}

double inverse_sqrt_weight_integral(const WeightSpec& w) {
    if (w.flat()) return std::numeric_limits<double>::infinity();
    // Substituting s = sinh(v) turns the slowly decaying integrand
    // (1+s^2)^{-(1+delta)/2} into cosh(v)^{-delta}, which falls off like
    // exp(-delta|v|) and converges to full precision; going through log cosh
    // keeps the evaluation finite for large |v|.
    const double d = w.delta();
    auto f = [d](double v) {
        double a = std::fabs(v);
        double log_cosh = a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
        return std::exp(-d * log_cosh);
    };
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
        15, 1e-10);
}

PointwiseDiagnostics pointwise_diagnostics(const CharacteristicState& s, const Grid& g,
                                           const WeightSpec& w) {
    PointwiseDiagnostics d;
    for (int j = 0; j < s.m; ++j) {
        double wl = w.sqrt_value(g.ubar_at(s.step, j));
        double wlb = w.sqrt_value(g.u_at(s.step, j));
        for (int i = 0; i < s.n_fields(); ++i) {
            d.sup_wL = std::max(d.sup_wL, wl * std::fabs(s.p[i][j]));
            d.sup_wLbar = std::max(d.sup_wLbar, wlb * std::fabs(s.q[i][j]));
        }
    }
    return d;
}

MixedDiagnostics mixed_weight_diagnostics(const CharacteristicState& s, const Grid& g,
                                          const WeightSpec& w) {
    MixedDiagnostics d;
    int m = s.m;
    double h = g.h();
    std::vector<double> wq(m), wp(m);
    for (int j = 0; j < m; ++j) {
        double u = g.u_at(s.step, j), ub = g.ubar_at(s.step, j);
        wq[j] = w.pow_value(u, 0.5) * w.pow_value(ub, -0.25);
        wp[j] = w.pow_value(ub, 0.5) * w.pow_value(u, -0.25);
    }
    std::vector<double> sq_q(m, 0.0), sq_dq(m, 0.0), sq_p(m, 0.0), sq_dp(m, 0.0), dwork;
    for (int i = 0; i < s.n_fields(); ++i) {
        spatial_derivative(s.q[i], h, dwork);
        for (int j = 0; j < m; ++j) {
            double a = wq[j] * s.q[i][j], b = wq[j] * dwork[j];
            d.sup_q = std::max(d.sup_q, std::fabs(a));
            sq_q[j] += a * a;
            sq_dq[j] += b * b;
        }
        spatial_derivative(s.p[i], h, dwork);
        for (int j = 0; j < m; ++j) {
            double a = wp[j] * s.p[i][j], b = wp[j] * dwork[j];
            d.sup_p = std::max(d.sup_p, std::fabs(a));
            sq_p[j] += a * a;
            sq_dp[j] += b * b;
        }
    }
    d.l2_pair_q = std::sqrt(trapezoid(sq_q, h)) + std::sqrt(trapezoid(sq_dq, h));
    d.l2_pair_p = std::sqrt(trapezoid(sq_p, h)) + std::sqrt(trapezoid(sq_dp, h));
    return d;
}

EnergyReport make_report(const CharacteristicState& s, const Grid& g, const WeightSpec& w,
                         const FluxAccumulators* flux, const SpacetimeAccumulator* st,
                         double e_initial) {
    EnergyReport r;
    r.t = s.t;
    r.e0 = slice_energy(s, g, w, 0);
    r.e1 = slice_energy(s, g, w, 1);
    r.f0 = flux ? flux->sup(0) : 0.0;
    r.f1 = flux ? flux->sup(1) : 0.0;
    r.f0_ubar_side = flux ? flux->side_sup_ubar(0) : 0.0;
    r.f1_ubar_side = flux ? flux->side_sup_ubar(1) : 0.0;
    r.e_total = r.e0 + r.e1;
    r.f_total = r.f0 + r.f1;
    r.ratio = e_initial > 0.0 ? (r.e_total + r.f_total) / e_initial : 0.0;

    PointwiseDiagnostics pd = pointwise_diagnostics(s, g, w);
    r.sup_wL = pd.sup_wL;
    r.sup_wLbar = pd.sup_wLbar;

    MixedDiagnostics md = mixed_weight_diagnostics(s, g, w);
    r.mixed_sup_q = md.sup_q;
    r.mixed_l2_q = md.l2_pair_q;
    r.mixed_sup_p = md.sup_p;
    r.mixed_l2_p = md.l2_pair_p;
    r.mixed_sup = std::max(md.sup_q, md.sup_p);

    r.st0 = st ? st->value(0) : 0.0;
    r.st1 = st ? st->value(1) : 0.0;
    return r;
}

MonitorResult bootstrap_monitor(const std::vector<EnergyReport>& reports, double threshold) {
    MonitorResult res;
    if (reports.empty()) return res;
    double e_init = reports.front().e_total;
    if (e_init <= 0.0) {
        for (const auto& r : reports)
            if (r.e_total + r.f_total > 0.0)
                throw DegenerateDataError(
                    "initial energy is zero but the solution grows; monitor ratio undefined");
        res.vacuous = true;
        return res;
    }
    for (const auto& r : reports) {
        res.max_ratio = std::max(res.max_ratio, r.ratio);
        if (r.ratio > threshold && !res.first_violation_t) {
            res.first_violation_t = r.t;
            res.passed = false;
        }
    }
    return res;
}

IdentityAccumulator::IdentityAccumulator(const Grid& g, const WeightSpec& w, double ubar0,
                                         long long max_steps)
    : grid_(g), w_(w) {
    (void)max_steps;
    double h = g.h();
    d2_0_ = std::llround((2.0 * ubar0 - g.x_min) / h);
    d1_0_ = std::llround((2.0 * ubar0 + g.x_min) / h);
}

double IdentityAccumulator::slice_q(const CharacteristicState& s, int j_hi) const {
    if (j_hi < 0) return 0.0;
    j_hi = std::min(j_hi, s.m - 1);
    std::vector<double> row(j_hi + 1, 0.0);
    for (int i = 0; i < s.n_fields(); ++i)
        for (int j = 0; j <= j_hi; ++j)
            row[j] += w_.value(grid_.u_at(s.step, j)) * s.q[i][j] * s.q[i][j];
    return trapezoid(row, grid_.h(), 0, j_hi);
}

double IdentityAccumulator::slice_p(const CharacteristicState& s, int j_lo) const {
    if (j_lo > s.m - 1) return 0.0;
    j_lo = std::max(j_lo, 0);
    std::vector<double> row(s.m - j_lo, 0.0);
    for (int i = 0; i < s.n_fields(); ++i)
        for (int j = j_lo; j < s.m; ++j)
            row[j - j_lo] += w_.value(grid_.ubar_at(s.step, j)) * s.p[i][j] * s.p[i][j];
    return trapezoid(row, grid_.h(), 0, s.m - 1 - j_lo);
}

double IdentityAccumulator::curve_q_value(const CharacteristicState& s, int j) const {
    if (j < 0 || j >= s.m) return 0.0;
    double sum = 0.0;
    for (int i = 0; i < s.n_fields(); ++i) sum += s.q[i][j] * s.q[i][j];
    return w_.value(grid_.u_at(s.step, j)) * sum;
}

double IdentityAccumulator::curve_p_value(const CharacteristicState& s, int j) const {
    if (j < 0 || j >= s.m) return 0.0;
    double sum = 0.0;
    for (int i = 0; i < s.n_fields(); ++i) sum += s.p[i][j] * s.p[i][j];
    return w_.value(grid_.ubar_at(s.step, j)) * sum;
}

double IdentityAccumulator::volume_q(const CharacteristicState& s, const NonlinearitySpec& spec,
                                     int j_hi) const {
    if (spec.trivial() || j_hi < 0) return 0.0;
    j_hi = std::min(j_hi, s.m - 1);
    int n = s.n_fields();
    nwork_p_.resize(n);
    nwork_q_.resize(n);
    nwork_n_.resize(n);
    std::vector<double> row(j_hi + 1, 0.0);
    for (int j = 0; j <= j_hi; ++j) {
        for (int i = 0; i < n; ++i) {
            nwork_p_[i] = s.p[i][j];
            nwork_q_[i] = s.q[i][j];
        }
        spec.evaluate(nwork_p_.data(), nwork_q_.data(), nwork_n_.data());
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += nwork_q_[i] * nwork_n_[i];
        row[j] = w_.value(grid_.u_at(s.step, j)) * sum;
    }
    return trapezoid(row, grid_.h(), 0, j_hi);
}

double IdentityAccumulator::volume_p(const CharacteristicState& s, const NonlinearitySpec& spec,
                                     int j_lo) const {
    if (spec.trivial() || j_lo > s.m - 1) return 0.0;
    j_lo = std::max(j_lo, 0);
    int n = s.n_fields();
    nwork_p_.resize(n);
    nwork_q_.resize(n);
    nwork_n_.resize(n);
    std::vector<double> row(s.m - j_lo, 0.0);
    for (int j = j_lo; j < s.m; ++j) {
        for (int i = 0; i < n; ++i) {
            nwork_p_[i] = s.p[i][j];
            nwork_q_[i] = s.q[i][j];
        }
        spec.evaluate(nwork_p_.data(), nwork_q_.data(), nwork_n_.data());
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += nwork_p_[i] * nwork_n_[i];
        row[j - j_lo] = w_.value(grid_.ubar_at(s.step, j)) * sum;
    }
    return trapezoid(row, grid_.h(), 0, s.m - 1 - j_lo);
}

void IdentityAccumulator::prime(const CharacteristicState& s, const NonlinearitySpec& spec) {
    int j_hi = static_cast<int>(d2_0_ - s.step);
    int j_lo = static_cast<int>(s.step - d1_0_);
    slice0_q_ = slice_q(s, j_hi);
    slice0_p_ = slice_p(s, j_lo);
    prev_curve_q_ = curve_q_value(s, j_hi);
    prev_curve_p_ = curve_p_value(s, j_lo);
    prev_vol_q_ = volume_q(s, spec, j_hi);
    prev_vol_p_ = volume_p(s, spec, j_lo);
}

void IdentityAccumulator::feed(const CharacteristicState& next, const NonlinearitySpec& spec) {
    double h = grid_.h();
    int j_hi = static_cast<int>(d2_0_ - next.step);
    int j_lo = static_cast<int>(next.step - d1_0_);

    double cq = curve_q_value(next, j_hi);
    double cp = curve_p_value(next, j_lo);
    curve_q_ += 0.5 * h * (prev_curve_q_ + cq);
    curve_p_ += 0.5 * h * (prev_curve_p_ + cp);
    prev_curve_q_ = cq;
    prev_curve_p_ = cp;

    double vq = volume_q(next, spec, j_hi);
    double vp = volume_p(next, spec, j_lo);
    vol_q_ += 0.5 * h * (prev_vol_q_ + vq);
    vol_p_ += 0.5 * h * (prev_vol_p_ + vp);
    prev_vol_q_ = vq;
    prev_vol_p_ = vp;
}

double IdentityAccumulator::Result::total_abs() const {
    return std::fabs(q_side) + std::fabs(p_side);
}

IdentityAccumulator::Result IdentityAccumulator::residual(
    const CharacteristicState& final_state) const {
    int j_hi = static_cast<int>(d2_0_ - final_state.step);
    int j_lo = static_cast<int>(final_state.step - d1_0_);
    Result r;
    r.q_side = 0.5 * slice_q(final_state, j_hi) + curve_q_ - 0.5 * slice0_q_ - vol_q_;
    r.p_side = 0.5 * slice_p(final_state, j_lo) + curve_p_ - 0.5 * slice0_p_ - vol_p_;
    return r;
}

} // namespace nullwave
