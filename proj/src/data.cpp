#include "nullwave/data.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nullwave/errors.hpp"

namespace nullwave {

namespace {

using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;

// Smoothstep pieces: psi(tau) = exp(-1/tau) extended by 0 for tau <= 0, and
// S = psi(tau) / (psi(tau) + psi(1-tau)), which rises smoothly from 0 at
// tau = 0 to 1 at tau = 1 with all derivatives vanishing at both ends.
double psi(double tau) { return tau <= 0.0 ? 0.0 : std::exp(-1.0 / tau); }
double psi_d(double tau) { return tau <= 0.0 ? 0.0 : psi(tau) / (tau * tau); }
double psi_dd(double tau) {
    if (tau <= 0.0) return 0.0;
    double t2 = tau * tau;
    return psi(tau) * (1.0 / (t2 * t2) - 2.0 / (t2 * tau));
}

struct Smooth {
    double s, sd, sdd;  // S(tau), S'(tau), S''(tau)
};

Smooth smoothstep(double tau) {
    double a = psi(tau), b = psi(1.0 - tau);
    double ad = psi_d(tau), bd = -psi_d(1.0 - tau);
    double add = psi_dd(tau), bdd = psi_dd(1.0 - tau);
    double den = a + b;
    double g = ad * b - a * bd;
    Smooth r;
    r.s = a / den;
    r.sd = g / (den * den);
    r.sdd = (add * b - a * bdd) / (den * den) - 2.0 * g * (ad + bd) / (den * den * den);
    return r;
}

} // namespace

ProfileFn ProfileFn::zero() { return ProfileFn{}; }

ProfileFn ProfileFn::gaussian(double center, double width, double amplitude) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian: width must be positive");
    ProfileFn p;
    p.kind = ProfileKind::Gaussian;
    p.center = center;
    p.width = width;
    p.amplitude = amplitude;
    return p;
}

ProfileFn ProfileFn::compact_bump(double center, double width, double amplitude) {
    if (!(width > 0.0)) throw std::invalid_argument("compact_bump: width must be positive");
    ProfileFn p;
    p.kind = ProfileKind::CompactBump;
    p.center = center;
    p.width = width;
    p.amplitude = amplitude;
    return p;
}

ProfileFn ProfileFn::plateau(double level, double half_width, double taper, double center) {
    if (!(half_width >= 0.0)) throw std::invalid_argument("plateau: half_width must be >= 0");
    if (!(taper > 0.0)) throw std::invalid_argument("plateau: taper must be positive");
    ProfileFn p;
    p.kind = ProfileKind::Plateau;
    p.center = center;
    p.level = level;
    p.half_width = half_width;
    p.taper = taper;
    return p;
}

double ProfileFn::value(double x) const {
    double s = (x - center) / width;
    switch (kind) {
    case ProfileKind::Zero:
        return 0.0;
    case ProfileKind::Gaussian:
        return amplitude * std::exp(-s * s);
    case ProfileKind::CompactBump: {
        if (!(std::fabs(s) < 1.0)) return 0.0;
        double w = 1.0 / (1.0 - s * s);
        return amplitude * std::exp(1.0 - w);
    }
    case ProfileKind::Plateau: {
        double tau = (half_width + taper - std::fabs(x - center)) / taper;
        if (tau >= 1.0) return level;
        if (tau <= 0.0) return 0.0;
        return level * smoothstep(tau).s;
    }
    }
    return 0.0;
}

double ProfileFn::deriv(double x) const {
    double s = (x - center) / width;
    switch (kind) {
    case ProfileKind::Zero:
        return 0.0;
    case ProfileKind::Gaussian:
        return amplitude * (-2.0 * s / width) * std::exp(-s * s);
    case ProfileKind::CompactBump: {
        if (!(std::fabs(s) < 1.0)) return 0.0;
        double w = 1.0 / (1.0 - s * s);
        return amplitude * std::exp(1.0 - w) * (-2.0 * s * w * w) / width;
    }
    case ProfileKind::Plateau: {
        double tau = (half_width + taper - std::fabs(x - center)) / taper;
        if (tau >= 1.0 || tau <= 0.0) return 0.0;
        double sign = x >= center ? 1.0 : -1.0;
        return level * smoothstep(tau).sd * (-sign / taper);
    }
    }
    return 0.0;
}

double ProfileFn::deriv2(double x) const {
    double s = (x - center) / width;
    switch (kind) {
    case ProfileKind::Zero:
        return 0.0;
    case ProfileKind::Gaussian:
        return amplitude * (4.0 * s * s - 2.0) / (width * width) * std::exp(-s * s);
    case ProfileKind::CompactBump: {
        if (!(std::fabs(s) < 1.0)) return 0.0;
        double w = 1.0 / (1.0 - s * s);
        double w2 = w * w;
        double core = -2.0 * w2 - 8.0 * s * s * w2 * w + 4.0 * s * s * w2 * w2;
        return amplitude * std::exp(1.0 - w) * core / (width * width);
    }
    case ProfileKind::Plateau: {
        double tau = (half_width + taper - std::fabs(x - center)) / taper;
        if (tau >= 1.0 || tau <= 0.0) return 0.0;
        return level * smoothstep(tau).sdd / (taper * taper);
    }
    }
    return 0.0;
}

double ProfileFn::peak() const {
    switch (kind) {
    case ProfileKind::Zero: return 0.0;
    case ProfileKind::Gaussian:
    case ProfileKind::CompactBump: return std::fabs(amplitude);
    case ProfileKind::Plateau: return std::fabs(level);
    }
    return 0.0;
}

double ProfileFn::support_radius(double rel) const {
    switch (kind) {
    case ProfileKind::Zero:
        return 0.0;
    case ProfileKind::Gaussian: {
        if (!(rel < 1.0)) return 0.0;
        // |exp(-s^2)| < rel outside |s| = sqrt(log(1/rel)); the extra width
        // covers the polynomial factors in the derivatives.
        return width * (std::sqrt(std::log(1.0 / rel)) + 1.0);
    }
    case ProfileKind::CompactBump:
        return width;
    case ProfileKind::Plateau:
        return half_width + taper;
    }
    return 0.0;
}

bool ProfileFn::is_zero() const {
    switch (kind) {
    case ProfileKind::Zero: return true;
    case ProfileKind::Gaussian:
    case ProfileKind::CompactBump: return amplitude == 0.0;
    case ProfileKind::Plateau: return level == 0.0;
    }
    return true;
}

ProfileFn ProfileFn::scaled(double c) const {
    ProfileFn p = *this;
    p.amplitude *= c;
    p.level *= c;
    return p;
}

std::string ProfileFn::describe() const {
    std::ostringstream os;
    switch (kind) {
    case ProfileKind::Zero:
        os << "zero";
        break;
    case ProfileKind::Gaussian:
        os << "gaussian(center=" << center << ", width=" << width << ", amplitude=" << amplitude << ")";
        break;
    case ProfileKind::CompactBump:
        os << "bump(center=" << center << ", width=" << width << ", amplitude=" << amplitude << ")";
        break;
    case ProfileKind::Plateau:
        os << "plateau(level=" << level << ", half_width=" << half_width << ", taper=" << taper
           << ", center=" << center << ")";
        break;
    }
    return os.str();
}

namespace {

// Fourth-order interior differences with second-order ends; only used when a
// profile declines to provide analytic derivatives.
void fd_derivative(const std::vector<double>& f, double h, std::vector<double>& out) {
    int m = static_cast<int>(f.size());
    out.resize(f.size());
    if (m < 5) {
        out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        for (int j = 1; j + 1 < m; ++j) out[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
        out[m - 1] = (3.0 * f[m - 1] - 4.0 * f[m - 2] + f[m - 3]) / (2.0 * h);
        return;
    }
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    out[1] = (f[2] - f[0]) / (2.0 * h);
    for (int j = 2; j + 2 < m; ++j)
        out[j] = (-f[j + 2] + 8.0 * f[j + 1] - 8.0 * f[j - 1] + f[j - 2]) / (12.0 * h);
    out[m - 2] = (f[m - 1] - f[m - 3]) / (2.0 * h);
    out[m - 1] = (3.0 * f[m - 1] - 4.0 * f[m - 2] + f[m - 3]) / (2.0 * h);
}

} // namespace

std::vector<SampledField> sample(const DataProfile& data, const Grid& grid) {
    std::vector<SampledField> out(data.fields.size());
    double h = grid.h();
    for (size_t i = 0; i < data.fields.size(); ++i) {
        const FieldProfile& fld = data.fields[i];
        SampledField& s = out[i];
        s.f.resize(grid.m);
        s.g.resize(grid.m);
        for (int j = 0; j < grid.m; ++j) {
            double x = grid.x(j);
            s.f[j] = fld.f.value(x);
            s.g[j] = fld.g_value(x);
        }
        bool fp_analytic = fld.f.analytic_derivative;
        bool gp_analytic = fld.g_is_minus_f_prime ? fld.f.analytic_derivative
                                                  : fld.g.analytic_derivative;
        if (fp_analytic) {
            s.fp.resize(grid.m);
            for (int j = 0; j < grid.m; ++j) s.fp[j] = fld.f.deriv(grid.x(j));
        } else {
            fd_derivative(s.f, h, s.fp);
        }
        if (gp_analytic) {
            s.gp.resize(grid.m);
            for (int j = 0; j < grid.m; ++j) s.gp[j] = fld.g_deriv(grid.x(j));
        } else {
            fd_derivative(s.g, h, s.gp);
        }
    }
    return out;
}

namespace {

double norm_integral(const FieldProfile& field, double delta) {
    auto integrand = [&](double x) {
        double w = std::exp((2.0 + 2.0 * delta) * std::log1p(std::fabs(x)));
        double fp = field.f.deriv(x);
        double fpp = field.f.deriv2(x);
        double g = field.g_value(x);
        double gp = field.g_deriv(x);
        return w * (fp * fp + fpp * fpp + g * g + gp * gp);
    };

    double lo = 0.0, hi = 0.0;
    bool any = false;
    auto widen = [&](const ProfileFn& p) {
        if (p.is_zero()) return;
        double r = p.support_radius(1e-300);
        double a = p.center - r, b = p.center + r;
        if (!any) { lo = a; hi = b; any = true; }
        else { lo = std::min(lo, a); hi = std::max(hi, b); }
    };
    widen(field.f);
    if (!field.g_is_minus_f_prime) widen(field.g);
    if (!any) return 0.0;

    // The weight has a |x| kink at the origin; keep it on a panel boundary.
    double total = 0.0, err_total = 0.0;
    auto piece = [&](double a, double b) {
        if (!(b > a)) return;
        double err = 0.0;
        total += Quad::integrate(integrand, a, b, 15, 1e-8, &err);
        err_total += err;
    };
    if (lo < 0.0 && hi > 0.0) {
        piece(lo, 0.0);
        piece(0.0, hi);
    } else {
        piece(lo, hi);
    }
    if (!std::isfinite(total))
        throw HypothesisViolation("weighted data norm diverged for " + field.f.describe());
    if (total > 0.0 && err_total > 1e-6 * total)
        throw HypothesisViolation("weighted data norm quadrature failed to converge");
    return total;
}

} // namespace

double weighted_sobolev_norm(const FieldProfile& field, double delta) {
    return norm_integral(field, delta);
}

double weighted_sobolev_norm(const DataProfile& data, double delta) {
    double total = 0.0;
    for (const auto& f : data.fields) total += norm_integral(f, delta);
    return total;
}

DataProfile normalize(const DataProfile& data, double delta) {
    double n = weighted_sobolev_norm(data, delta);
    if (!(n > 0.0))
        throw DegenerateDataError("cannot normalize data with zero weighted norm");
    double c = 1.0 / std::sqrt(n);
    DataProfile out = data;
    for (auto& f : out.fields) {
        f.f = f.f.scaled(c);
        f.g = f.g.scaled(c);
    }
    return out;
}

} // namespace nullwave
