#ifndef NULLWAVE_DATA_HPP
#define NULLWAVE_DATA_HPP

#include <string>
#include <vector>

#include "nullwave/grid.hpp"

namespace nullwave {

enum class ProfileKind { Zero, Gaussian, CompactBump, Plateau };

/// One scalar profile on the line.
///
///   gaussian      amplitude * exp(-((x-center)/width)^2)
///   compact_bump  amplitude * exp(1 - 1/(1 - s^2)), s = (x-center)/width, |s| < 1
///   plateau       level on |x-center| <= half_width, smooth taper to 0 over
///                 [half_width, half_width + taper]
///   zero          0
///
/// All kinds carry analytic first and second derivatives.  When
/// analytic_derivative is false, grid sampling falls back to fourth-order
/// centered differences of the sampled values instead.
struct ProfileFn {
    ProfileKind kind = ProfileKind::Zero;
    double center = 0.0;
    double width = 1.0;
    double amplitude = 0.0;
    double level = 0.0;
    double half_width = 0.0;
    double taper = 1.0;
    bool analytic_derivative = true;

    static ProfileFn zero();
    static ProfileFn gaussian(double center, double width, double amplitude);
    static ProfileFn compact_bump(double center, double width, double amplitude);
    static ProfileFn plateau(double level, double half_width, double taper, double center = 0.0);

    double value(double x) const;
    double deriv(double x) const;
    double deriv2(double x) const;

    /// Largest |value| over the line.
    double peak() const;

    /// Distance from center beyond which |value| stays below rel * peak.
    /// Exact for the compactly supported kinds.
    double support_radius(double rel) const;

    bool is_zero() const;
    ProfileFn scaled(double c) const;
    std::string describe() const;
};

/// Initial data for one field: phi(0) = eps*F, d_t phi(0) = eps*G.
/// g_is_minus_f_prime replaces G by -F' (a purely right-moving field).
struct FieldProfile {
    ProfileFn f;
    ProfileFn g;
    bool g_is_minus_f_prime = false;

    double g_value(double x) const { return g_is_minus_f_prime ? -f.deriv(x) : g.value(x); }
    double g_deriv(double x) const { return g_is_minus_f_prime ? -f.deriv2(x) : g.deriv(x); }
};

struct DataProfile {
    std::vector<FieldProfile> fields;

    int n_fields() const { return static_cast<int>(fields.size()); }
};

/// Grid samples of (F, G) and their spatial derivatives for one field.
struct SampledField {
    std::vector<double> f, g, fp, gp;
};

std::vector<SampledField> sample(const DataProfile& data, const Grid& grid);

/// Hypothesis norm of one field,
///   int (1+|x|)^(2+2delta) (F'^2 + F''^2 + G^2 + G'^2) dx,
/// by adaptive Gauss-Kronrod quadrature to relative tolerance 1e-8.
double weighted_sobolev_norm(const FieldProfile& field, double delta);

/// Sum over fields.
double weighted_sobolev_norm(const DataProfile& data, double delta);

/// Scales all fields by norm^(-1/2) so the summed norm is 1.
DataProfile normalize(const DataProfile& data, double delta);

} // namespace nullwave

#endif
