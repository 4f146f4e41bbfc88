#ifndef NULLWAVE_EXPERIMENTS_HPP
#define NULLWAVE_EXPERIMENTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "nullwave/run_config.hpp"
#include "nullwave/solver.hpp"

// Multi-run studies: grid convergence, blow-up time detection and refinement,
// nonlinear-increment scaling in the data amplitude, and lifespan sweeps.

namespace nullwave {

enum class ConvergenceReference {
    ClosedForm,   // linear runs: compare against the d'Alembert solution
    SelfRefined,  // errors are sup differences between successive rungs
};

struct ConvergenceRung {
    int m = 0;
    double h = 0.0;
    double error = 0.0;                 // sup-norm error for this rung
    std::optional<double> order;        // log2(prev_error / error)
};

struct ConvergenceResult {
    ConvergenceReference reference = ConvergenceReference::ClosedForm;
    std::vector<ConvergenceRung> rungs;
};

/// Runs cfg on each grid size in ms (finer grids keep the same extent and
/// final time; each m must be reachable from the coarsest by doubling cells,
/// m -> 2m - 1, so rungs share sample points).  Linear specs are measured
/// against the closed-form solution on the final slice; nonlinear specs use
/// successive differences on the shared (coarse) points.
ConvergenceResult convergence_study(const RunConfig& cfg, const std::vector<int>& ms);

/// Predicted blow-up time 1 / (eps * a) for plateau data of interior slope
/// parameter a = level > 0 driving d_t v = eps * v^2 from v(0) = level
/// under a genuinely non-null self-interaction of unit strength.  Empty when
/// the configuration is not of that shape.
std::optional<double> ode_blowup_time(const RunConfig& cfg);

struct BlowupDetection {
    bool blew_up = false;
    double t_coarse = 0.0;
    double t_fine = 0.0;
    double estimate = 0.0;      // = t_fine
    bool low_confidence = false;  // rungs differ by more than 10%
    std::string cause;
};

/// Runs cfg to t_final or blow-up, then repeats at m -> 2m - 1.  Corrector
/// non-convergence and non-finite values count as blow-up alongside the
/// amplitude threshold.
BlowupDetection detect_blowup(const RunConfig& cfg);

struct IncrementScalingRow {
    double eps = 0.0;
    double delta_sup = 0.0;             // max_t | (E+F) - (E+F)_linear |
    std::optional<double> nu;           // log2 of successive delta ratios
    bool conclusive = false;            // delta above the rounding floor
};

struct IncrementScalingResult {
    std::vector<IncrementScalingRow> rows;
    double rounding_floor = 0.0;
};

/// For each amplitude, runs the configured spec and a linear spec with the
/// same data, and takes the largest pointwise-in-time difference of E + F.
/// Rows below the rounding floor (machine epsilon x steps x scale) are
/// inconclusive and excluded from the order estimates.
IncrementScalingResult increment_scaling(const RunConfig& cfg, const std::vector<double>& eps_values);

struct LifespanEntry {
    double eps = 0.0;
    double t_star = 0.0;
    bool censored = false;  // reached the time cap without blowing up
};

struct LifespanResult {
    std::vector<LifespanEntry> entries;
    std::vector<double> ratios;  // t*(eps) / t*(2 eps) over uncensored pairs
};

/// Observed lifespan at each amplitude, bounded by per-entry time caps
/// (cap <= 0 keeps cfg.t_final).
LifespanResult lifespan_sweep(const RunConfig& cfg, const std::vector<double>& eps_values,
                              const std::vector<double>& t_caps);

} // namespace nullwave

#endif
