#ifndef NULLWAVE_GEOMETRY_HPP
#define NULLWAVE_GEOMETRY_HPP

#include <cmath>
#include <stdexcept>
#include <string>

// Null geometry of the 1+1 Minkowski plane, metric -dt^2 + dx^2.
//
// Null coordinates   u = (t - x)/2,  ubar = (t + x)/2
// Null frame         L = d_t + d_x,  Lbar = d_t - d_x
// so L u = 0, Lbar ubar = 0: u is constant along right-going rays and ubar
// along left-going ones.  The decay weights attach to these coordinates.

namespace nullwave {

struct NullCoords {
    double u;
    double ubar;

    double t() const { return u + ubar; }
    double x() const { return ubar - u; }
};

inline NullCoords to_null_coords(double t, double x) {
    if (!std::isfinite(t) || !std::isfinite(x))
        throw std::domain_error("to_null_coords: non-finite input");
    return {0.5 * (t - x), 0.5 * (t + x)};
}

inline double from_null_t(const NullCoords& c) { return c.u + c.ubar; }
inline double from_null_x(const NullCoords& c) { return c.ubar - c.u; }

/// Polynomial decay weight (1 + s^2)^(1+delta) with 0 < delta < 1.
///
/// Evaluated as exp((1+delta) log1p(s^2)) so that the value is exactly 1 at
/// s = 0 and even in s at the bit level.  pow_value exposes fractional powers
/// (1 + s^2)^(alpha (1+delta)) for the square-root and mixed weights.
/// unweighted() turns the weight off (identically 1); diagnostics only.
class WeightSpec {
public:
    explicit WeightSpec(double delta) : delta_(delta) {
        if (!(delta > 0.0 && delta < 1.0))
            throw std::invalid_argument("WeightSpec: delta must lie in (0,1), got " +
                                        std::to_string(delta));
    }

    static WeightSpec unweighted() {
        WeightSpec w(0.5);
        w.flat_ = true;
        return w;
    }

    double delta() const { return delta_; }
    bool flat() const { return flat_; }

    double value(double s) const { return pow_value(s, 1.0); }
    double sqrt_value(double s) const { return pow_value(s, 0.5); }

    double pow_value(double s, double alpha) const {
        if (flat_) return 1.0;
        double r = std::exp(alpha * (1.0 + delta_) * std::log1p(s * s));
        if (!std::isfinite(r) && alpha > 0.0)
            throw std::overflow_error("weight saturated at s = " + std::to_string(s));
        return r;
    }

private:
    double delta_;
    bool flat_ = false;
};

} // namespace nullwave

#endif
