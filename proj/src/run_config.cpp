#include "nullwave/run_config.hpp"

#include <cmath>
#include <sstream>

#include "nullwave/errors.hpp"

namespace nullwave {

namespace {

bool near_integer(double v, double tol) {
    return std::fabs(v - std::round(v)) <= tol * std::max(1.0, std::fabs(v));
}

} // namespace

std::vector<std::string> validate(const RunConfig& cfg) {
    std::vector<std::string> bad;
    auto fail = [&](const std::string& m) { bad.push_back(m); };

    if (cfg.grid.m < 3) fail("grid: need at least 3 points");
    if (!(cfg.grid.x_max > cfg.grid.x_min)) fail("grid: x_max must exceed x_min");
    if (!std::isfinite(cfg.grid.x_min) || !std::isfinite(cfg.grid.x_max))
        fail("grid: bounds must be finite");
    if (!bad.empty()) return bad;  // everything below needs a usable grid

    double h = cfg.grid.h();
    if (!(cfg.t_final > 0.0) || !std::isfinite(cfg.t_final))
        fail("time: t_final must be positive and finite");
    else if (!near_integer(cfg.t_final / h, 1e-8))
        fail("time: t_final must be an integer multiple of the grid spacing h = " +
             std::to_string(h));
    if (!(cfg.cadence > 0.0) || !std::isfinite(cfg.cadence))
        fail("time: cadence must be positive and finite");

    if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
        fail("weights: delta must lie in (0, 1)");

    if (!(cfg.eps >= 0.0) || !std::isfinite(cfg.eps))
        fail("data: eps must be nonnegative and finite");
    if (!(cfg.support_tol_rel > 0.0 && cfg.support_tol_rel < 1.0))
        fail("data: support_tol_rel must lie in (0, 1)");

    if (cfg.data.fields.empty())
        fail("data: at least one field is required");
    else if (cfg.data.n_fields() != cfg.spec.fields())
        fail("nonlinearity: spec covers " + std::to_string(cfg.spec.fields()) +
             " field(s) but data defines " + std::to_string(cfg.data.n_fields()));

    bool all_zero = true;
    for (const auto& f : cfg.data.fields)
        if (!f.f.is_zero() || (!f.g_is_minus_f_prime && !f.g.is_zero())) all_zero = false;
    if (cfg.normalize_data && all_zero)
        fail("data: normalization requested but the data is identically zero");

    // Domain-of-dependence margin: supports must stay clear of the boundary
    // for the whole run so the zero inflow condition is exact.
    if (cfg.t_final > 0.0 && std::isfinite(cfg.t_final)) {
        double pad = cfg.t_final + 2.0 * h;
        for (size_t i = 0; i < cfg.data.fields.size(); ++i) {
            const FieldProfile& fld = cfg.data.fields[i];
            auto check = [&](const ProfileFn& p, const char* slot) {
                if (p.is_zero()) return;
                double r = p.support_radius(cfg.support_tol_rel);
                if (p.center - r - pad < cfg.grid.x_min || p.center + r + pad > cfg.grid.x_max) {
                    std::ostringstream os;
                    os << "data: field " << (i + 1) << " " << slot << " profile needs ["
                       << (p.center - r - pad) << ", " << (p.center + r + pad)
                       << "] but the grid covers [" << cfg.grid.x_min << ", " << cfg.grid.x_max
                       << "]";
                    fail(os.str());
                }
            };
            check(fld.f, "f");
            if (!fld.g_is_minus_f_prime) check(fld.g, "g");
        }
    }

    if (!(cfg.monitors.ratio_threshold >= 1.0))
        fail("monitors: ratio_threshold must be at least 1");
    if (!(cfg.monitors.blowup_factor > 1.0))
        fail("monitors: blowup_factor must exceed 1");
    if (cfg.monitors.identity_ubar) {
        double ub = *cfg.monitors.identity_ubar;
        double d2 = (2.0 * ub - cfg.grid.x_min) / h;
        if (!near_integer(d2, 1e-9))
            fail("monitors: identity_ubar must place the curve on a grid diagonal");
        if (!(2.0 * ub > cfg.grid.x_min && 2.0 * ub < cfg.grid.x_max) ||
            !(-2.0 * ub > cfg.grid.x_min && -2.0 * ub < cfg.grid.x_max))
            fail("monitors: identity_ubar curves must start strictly inside the grid");
        else if (!(2.0 * ub - cfg.t_final > cfg.grid.x_min &&
                   cfg.t_final - 2.0 * ub < cfg.grid.x_max))
            fail("monitors: identity_ubar curves leave the grid before t_final");
    }

    return bad;
}

void require_valid(const RunConfig& cfg) {
    std::vector<std::string> bad = validate(cfg);
    if (!bad.empty()) throw ConfigError(std::move(bad));
}

} // namespace nullwave
