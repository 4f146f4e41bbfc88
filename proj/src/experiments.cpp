#include "nullwave/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nullwave/errors.hpp"

namespace nullwave {

namespace {

bool is_power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

} // namespace

ConvergenceResult convergence_study(const RunConfig& cfg, const std::vector<int>& ms) {
    if (ms.size() < 2)
        throw ConfigError({"study: convergence needs at least two grid sizes"});
    for (size_t i = 0; i < ms.size(); ++i) {
        if (ms[i] < 3) throw ConfigError({"study: grid sizes must be at least 3"});
        long long ratio_num = ms[i] - 1, base = ms[0] - 1;
        if (ratio_num % base != 0 || !is_power_of_two(ratio_num / base) ||
            (i > 0 && ms[i] <= ms[i - 1]))
            throw ConfigError({"study: grid sizes must refine the coarsest by repeated "
                               "cell doubling (m -> 2m - 1), in increasing order"});
    }

    ConvergenceResult out;
    out.reference = cfg.spec.trivial() ? ConvergenceReference::ClosedForm
                                       : ConvergenceReference::SelfRefined;

    DataProfile reference_data = cfg.data;
    if (cfg.normalize_data) reference_data = normalize(cfg.data, cfg.delta);

    std::vector<std::vector<std::vector<double>>> finals;  // per rung, per field, phi slice
    for (int m : ms) {
        RunConfig c = cfg;
        c.grid = Grid(cfg.grid.x_min, cfg.grid.x_max, m);
        c.blowup_as_event = false;
        RunResult r = run(c);

        ConvergenceRung rung;
        rung.m = m;
        rung.h = c.grid.h();

        if (out.reference == ConvergenceReference::ClosedForm) {
            double err = 0.0;
            double t = r.final_state.t;
            for (int i = 0; i < r.final_state.n_fields(); ++i)
                for (int j = 0; j < m; ++j) {
                    double ref = dalembert_reference(reference_data.fields[i], cfg.eps, t,
                                                     c.grid.x(j));
                    err = std::max(err, std::fabs(r.final_state.phi[i][j] - ref));
                }
            rung.error = err;
        }
        finals.push_back(r.final_state.phi);
        out.rungs.push_back(rung);
    }

    if (out.reference == ConvergenceReference::SelfRefined) {
        // Error on rung i (i >= 1): sup difference from rung i-1 on the
        // coarser rung's points, which the finer grid contains exactly.
        out.rungs[0].error = std::numeric_limits<double>::quiet_NaN();
        for (size_t i = 1; i < ms.size(); ++i) {
            long long stride = (static_cast<long long>(ms[i]) - 1) / (ms[i - 1] - 1);
            double err = 0.0;
            for (size_t f = 0; f < finals[i].size(); ++f)
                for (int j = 0; j < ms[i - 1]; ++j)
                    err = std::max(err, std::fabs(finals[i][f][static_cast<size_t>(j) * stride] -
                                                  finals[i - 1][f][j]));
            out.rungs[i].error = err;
        }
    }

    size_t first_measured = out.reference == ConvergenceReference::ClosedForm ? 1 : 2;
    for (size_t i = first_measured; i < out.rungs.size(); ++i) {
        double prev = out.rungs[i - 1].error, cur = out.rungs[i].error;
        if (prev > 0.0 && cur > 0.0) out.rungs[i].order = std::log2(prev / cur);
    }
    return out;
}

std::optional<double> ode_blowup_time(const RunConfig& cfg) {
    if (cfg.data.n_fields() != 1 || cfg.spec.trivial() || cfg.spec.fields() != 1)
        return std::nullopt;
    const FieldProfile& fld = cfg.data.fields[0];
    if (!fld.f.is_zero() || fld.g_is_minus_f_prime || fld.g.kind != ProfileKind::Plateau)
        return std::nullopt;

    const NullFrameForm& b = cfg.spec.block(0, 0, 0);
    double sigma = b.pp + b.pq + b.qp + b.qq;

    double level = fld.g.level;
    if (cfg.normalize_data) {
        double n = weighted_sobolev_norm(cfg.data, cfg.delta);
        if (!(n > 0.0)) return std::nullopt;
        level /= std::sqrt(n);
    }
    double v0 = cfg.eps * level;
    if (!(sigma * v0 > 0.0)) return std::nullopt;
    return 1.0 / (sigma * v0);
}

BlowupDetection detect_blowup(const RunConfig& cfg) {
    BlowupDetection out;

    auto one = [&](int m, double& t_out, bool& blew, std::string& cause) {
        RunConfig c = cfg;
        c.grid = Grid(cfg.grid.x_min, cfg.grid.x_max, m);
        c.blowup_as_event = true;
        RunResult r = run(c);
        blew = r.blowup.has_value();
        if (blew) {
            t_out = r.blowup->t;
            cause = r.blowup->cause;
        } else {
            t_out = c.t_final;
        }
    };

    bool blew_coarse = false, blew_fine = false;
    std::string cause_coarse, cause_fine;
    one(cfg.grid.m, out.t_coarse, blew_coarse, cause_coarse);
    one(2 * cfg.grid.m - 1, out.t_fine, blew_fine, cause_fine);

    out.blew_up = blew_fine;
    out.estimate = out.t_fine;
    out.cause = blew_fine ? cause_fine : cause_coarse;
    double gap = std::fabs(out.t_fine - out.t_coarse);
    out.low_confidence = (blew_coarse != blew_fine) ||
                         (out.t_fine > 0.0 && gap > 0.1 * out.t_fine);
    return out;
}

IncrementScalingResult increment_scaling(const RunConfig& cfg,
                                         const std::vector<double>& eps_values) {
    if (eps_values.empty())
        throw ConfigError({"study: increment scaling needs at least one eps value"});

    IncrementScalingResult out;
    for (double eps : eps_values) {
        RunConfig nonlinear = cfg;
        nonlinear.eps = eps;
        nonlinear.blowup_as_event = false;
        RunConfig linear = nonlinear;
        linear.spec = NonlinearitySpec::linear(cfg.spec.fields());

        RunResult rn = run(nonlinear);
        RunResult rl = run(linear);

        size_t nt = std::min(rn.reports.size(), rl.reports.size());
        double delta_sup = 0.0, scale = 0.0;
        for (size_t i = 0; i < nt; ++i) {
            double a = rn.reports[i].e_total + rn.reports[i].f_total;
            double b = rl.reports[i].e_total + rl.reports[i].f_total;
            delta_sup = std::max(delta_sup, std::fabs(a - b));
            scale = std::max(scale, std::max(std::fabs(a), std::fabs(b)));
        }
        double floor = std::numeric_limits<double>::epsilon() *
                       static_cast<double>(nonlinear.steps()) * scale;
        out.rounding_floor = std::max(out.rounding_floor, floor);

        IncrementScalingRow row;
        row.eps = eps;
        row.delta_sup = delta_sup;
        row.conclusive = delta_sup >= 100.0 * floor;
        out.rows.push_back(row);
    }

    for (size_t i = 1; i < out.rows.size(); ++i) {
        const IncrementScalingRow& a = out.rows[i - 1];
        IncrementScalingRow& b = out.rows[i];
        if (a.conclusive && b.conclusive && b.eps > 0.0 && a.delta_sup > 0.0 &&
            b.delta_sup > 0.0 && std::fabs(a.eps / b.eps - 2.0) < 1e-12)
            b.nu = std::log2(a.delta_sup / b.delta_sup);
    }
    return out;
}

LifespanResult lifespan_sweep(const RunConfig& cfg, const std::vector<double>& eps_values,
                              const std::vector<double>& t_caps) {
    if (eps_values.empty())
        throw ConfigError({"study: lifespan sweep needs at least one eps value"});
    if (!t_caps.empty() && t_caps.size() != eps_values.size())
        throw ConfigError({"study: t_caps must match eps_values in length"});

    LifespanResult out;
    for (size_t i = 0; i < eps_values.size(); ++i) {
        RunConfig c = cfg;
        c.eps = eps_values[i];
        if (!t_caps.empty() && t_caps[i] > 0.0) c.t_final = t_caps[i];
        c.blowup_as_event = true;
        RunResult r = run(c);

        LifespanEntry e;
        e.eps = eps_values[i];
        e.censored = !r.blowup.has_value();
        e.t_star = e.censored ? c.t_final : r.blowup->t;
        out.entries.push_back(e);
    }

    for (size_t i = 1; i < out.entries.size(); ++i) {
        const LifespanEntry& big = out.entries[i - 1];
        const LifespanEntry& small = out.entries[i];
        if (!big.censored && !small.censored && small.eps > 0.0 &&
            std::fabs(big.eps / small.eps - 2.0) < 1e-12 && big.t_star > 0.0)
            out.ratios.push_back(small.t_star / big.t_star);
    }
    return out;
}

} // namespace nullwave
