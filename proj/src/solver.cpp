#include "nullwave/solver.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "nullwave/errors.hpp"

namespace nullwave {

namespace {

constexpr double kCorrectorTol = 1e-12;
constexpr int kCorrectorMaxIter = 8;
constexpr double kSqrtPi = 1.7724538509055160273;

void check_boundary_support(const CharacteristicState& s, double threshold, const char* when) {
    int cells[4] = {0, 1, s.m - 2, s.m - 1};
    for (int i = 0; i < s.n_fields(); ++i)
        for (int c : cells)
            if (std::fabs(s.p[i][c]) > threshold || std::fabs(s.q[i][c]) > threshold)
                throw MarginError(std::string("numerical support reached the boundary (") +
                                  when + ", cell " + std::to_string(c) + ", t = " +
                                  std::to_string(s.t) + "); enlarge the grid");
}

} // namespace

CharacteristicState initialize(const RunConfig& cfg, double* norm_before_scaling) {
    require_valid(cfg);

    double norm = weighted_sobolev_norm(cfg.data, cfg.delta);
    if (norm_before_scaling) *norm_before_scaling = norm;

    DataProfile data = cfg.data;
    if (cfg.normalize_data) data = normalize(data, cfg.delta);

    std::vector<SampledField> fields = sample(data, cfg.grid);
    int n = static_cast<int>(fields.size());
    CharacteristicState s = CharacteristicState::zeros(n, cfg.grid.m);
    for (int i = 0; i < n; ++i) {
        const SampledField& f = fields[i];
        for (int j = 0; j < cfg.grid.m; ++j) {
            s.phi[i][j] = cfg.eps * f.f[j];
            s.p[i][j] = cfg.eps * (f.g[j] + f.fp[j]);
            s.q[i][j] = cfg.eps * (f.g[j] - f.fp[j]);
        }
    }
    check_boundary_support(s, cfg.support_tol_rel * s.max_abs_pq(), "initial data");
    return s;
}

void step(CharacteristicState& s, const Grid& grid, const NonlinearitySpec& spec) {
    int m = s.m;
    int n = s.n_fields();
    double h = grid.h();
    double t_new = static_cast<double>(s.step + 1) * h;

    // Trapezoidal update of phi needs d_t phi = (p+q)/2 at both time levels.
    std::vector<std::vector<double>> old_sum(n, std::vector<double>(m));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) old_sum[i][j] = s.p[i][j] + s.q[i][j];

    if (spec.trivial()) {
        // Pure transport: p moves one cell left, q one cell right, with zero
        // inflow.  Exact for the linear system.
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j + 1 < m; ++j) s.p[i][j] = s.p[i][j + 1];
            s.p[i][m - 1] = 0.0;
            for (int j = m - 1; j > 0; --j) s.q[i][j] = s.q[i][j - 1];
            s.q[i][0] = 0.0;
        }
    } else {
        // N at the old time level, per cell.
        std::vector<double> pv(n), qv(n), nv(n);
        std::vector<std::vector<double>> n_old(n, std::vector<double>(m));
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < n; ++i) {
                pv[i] = s.p[i][j];
                qv[i] = s.q[i][j];
            }
            spec.evaluate(pv.data(), qv.data(), nv.data());
            for (int i = 0; i < n; ++i) {
                if (!std::isfinite(nv[i]))
                    throw NumericalFailure(t_new, j, "non-finite nonlinearity value");
                n_old[i][j] = nv[i];
            }
        }

        std::vector<std::vector<double>> p_new(n, std::vector<double>(m));
        std::vector<std::vector<double>> q_new(n, std::vector<double>(m));
        std::vector<double> base_p(n), base_q(n), p_it(n), q_it(n);
        for (int j = 0; j < m; ++j) {
            bool all_zero = true;
            for (int i = 0; i < n; ++i) {
                if (j + 1 < m) {
                    base_p[i] = s.p[i][j + 1] + 0.5 * h * n_old[i][j + 1];
                    p_it[i] = s.p[i][j + 1];
                } else {
                    base_p[i] = 0.0;
                    p_it[i] = 0.0;
                }
                if (j - 1 >= 0) {
                    base_q[i] = s.q[i][j - 1] + 0.5 * h * n_old[i][j - 1];
                    q_it[i] = s.q[i][j - 1];
                } else {
                    base_q[i] = 0.0;
                    q_it[i] = 0.0;
                }
                if (base_p[i] != 0.0 || base_q[i] != 0.0 || p_it[i] != 0.0 || q_it[i] != 0.0)
                    all_zero = false;
            }
            if (all_zero) {
                for (int i = 0; i < n; ++i) {
                    p_new[i][j] = 0.0;
                    q_new[i][j] = 0.0;
                }
                continue;
            }

            // Fixed point x = base + (h/2) N(x), seeded with the transported
            // predictor.
            bool converged = false;
            for (int it = 0; it < kCorrectorMaxIter && !converged; ++it) {
                spec.evaluate(p_it.data(), q_it.data(), nv.data());
                double change = 0.0;
                for (int i = 0; i < n; ++i) {
                    double np = base_p[i] + 0.5 * h * nv[i];
                    double nq = base_q[i] + 0.5 * h * nv[i];
                    if (!std::isfinite(np) || !std::isfinite(nq))
                        throw NumericalFailure(t_new, j, "non-finite value in corrector");
                    change = std::max(change, std::fabs(np - p_it[i]));
                    change = std::max(change, std::fabs(nq - q_it[i]));
                    p_it[i] = np;
                    q_it[i] = nq;
                }
                converged = change <= kCorrectorTol;
            }
            if (!converged)
                throw StepFailure(t_new, j, "corrector failed to converge at cell " +
                                                std::to_string(j));
            for (int i = 0; i < n; ++i) {
                p_new[i][j] = p_it[i];
                q_new[i][j] = q_it[i];
            }
        }
        s.p = std::move(p_new);
        s.q = std::move(q_new);
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            s.phi[i][j] += 0.25 * h * (old_sum[i][j] + s.p[i][j] + s.q[i][j]);

    s.step += 1;
    s.t = static_cast<double>(s.step) * h;
}

void commuted_derivatives(const CharacteristicState& s, const Grid& grid,
                          std::vector<std::vector<double>>& dp,
                          std::vector<std::vector<double>>& dq) {
    int n = s.n_fields();
    dp.resize(n);
    dq.resize(n);
    for (int i = 0; i < n; ++i) {
        spatial_derivative(s.p[i], grid.h(), dp[i]);
        spatial_derivative(s.q[i], grid.h(), dq[i]);
    }
}

RunResult run(const RunConfig& cfg) {
    require_valid(cfg);

    RunResult res;
    res.theorem_regime = cfg.spec.all_null(1e-12) && cfg.delta > 0.0 && cfg.delta < 1.0;

    CharacteristicState s = initialize(cfg, &res.norm_before_scaling);
    WeightSpec w(cfg.delta);
    long long steps = cfg.steps();
    long long stride = cfg.cadence_stride();

    FluxAccumulators flux(cfg.grid, w, steps);
    flux.prime(s);
    SpacetimeAccumulator st(cfg.grid, w, steps);
    std::optional<IdentityAccumulator> ident;
    if (cfg.monitors.identity_ubar) {
        ident.emplace(cfg.grid, w, *cfg.monitors.identity_ubar, steps);
        ident->prime(s, cfg.spec);
    }

    double initial_max = s.max_abs_pq();
    double blowup_threshold = cfg.monitors.blowup_factor * initial_max;
    double support_threshold = cfg.support_tol_rel * initial_max;

    res.e_initial = slice_energy(s, cfg.grid, w, 0) + slice_energy(s, cfg.grid, w, 1);
    res.reports.push_back(make_report(s, cfg.grid, w, &flux, &st, res.e_initial));
    long long last_report_step = 0;

    for (long long k = 1; k <= steps; ++k) {
        try {
            step(s, cfg.grid, cfg.spec);
        } catch (const StepFailure& e) {
            if (!cfg.blowup_as_event) throw;
            res.blowup = BlowupEvent{e.t(), "corrector", e.cell()};
            break;
        } catch (const NumericalFailure& e) {
            if (!cfg.blowup_as_event) throw;
            res.blowup = BlowupEvent{e.t(), "nan", e.cell()};
            break;
        }
        flux.update(s);
        st.update(s);
        if (ident) ident->feed(s, cfg.spec);
        check_boundary_support(s, support_threshold, "during run");

        bool tick = (k % stride == 0) || (k == steps);
        double mx = s.max_abs_pq();
        if (mx > blowup_threshold && initial_max > 0.0) {
            res.blowup = BlowupEvent{s.t, "threshold", -1};
            tick = true;
        }
        if (tick) {
            res.reports.push_back(make_report(s, cfg.grid, w, &flux, &st, res.e_initial));
            last_report_step = s.step;
        }
        if (res.blowup) break;
    }

    if (s.step != last_report_step)
        res.reports.push_back(make_report(s, cfg.grid, w, &flux, &st, res.e_initial));

    res.monitor = bootstrap_monitor(res.reports, cfg.monitors.ratio_threshold);
    if (ident) res.identity = ident->residual(s);
    res.final_state = std::move(s);
    return res;
}

namespace {

double g_antiderivative(const FieldProfile& field, double y) {
    const ProfileFn& g = field.g;
    switch (g.kind) {
    case ProfileKind::Zero:
        return 0.0;
    case ProfileKind::Gaussian:
        return g.amplitude * g.width * 0.5 * kSqrtPi *
               boost::math::erf((y - g.center) / g.width);
    default: {
        if (y == g.center) return 0.0;
        auto f = [&](double v) { return g.value(v); };
        return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            f, g.center, y, 15, 1e-12);
    }
    }
}

} // namespace

double dalembert_reference(const FieldProfile& field, double eps, double t, double x) {
    if (field.g_is_minus_f_prime) {
        // G1 = -F collapses the average to the pure right mover F(x - t);
        // computing it directly keeps the tails exact instead of losing them
        // to cancellation between the two traveling parts.
        return eps * field.f.value(x - t);
    }
    double f_part = 0.5 * (field.f.value(x + t) + field.f.value(x - t));
    double g_part = 0.5 * (g_antiderivative(field, x + t) - g_antiderivative(field, x - t));
    return eps * (f_part + g_part);
}

} // namespace nullwave
