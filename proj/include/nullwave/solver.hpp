#ifndef NULLWAVE_SOLVER_HPP
#define NULLWAVE_SOLVER_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nullwave/data.hpp"
#include "nullwave/energy.hpp"
#include "nullwave/run_config.hpp"
#include "nullwave/state.hpp"

// Characteristic integrator for the first-order system
//
//   Lbar p = N(p, q),   L q = N(p, q),   d_t phi = (p + q) / 2
//
// on a uniform grid with dt = h.  p is constant along lines of constant ubar
// (one cell left per step), q along lines of constant u (one cell right per
// step); the incoming boundary values are zero, which is exact as long as the
// support margin holds.  Each step solves the per-cell trapezoidal corrector
//
//   x = x_transported + (h/2) (N_old_at_foot + N_new(x))
//
// by fixed-point iteration from the transported predictor.  Linear runs take
// the N = 0 branch and transport bit-exactly.

namespace nullwave {

struct BlowupEvent {
    double t = 0.0;
    std::string cause;  // "threshold" | "corrector" | "nan"
    int cell = -1;
};

struct RunResult {
    std::vector<EnergyReport> reports;
    std::optional<BlowupEvent> blowup;
    CharacteristicState final_state;
    double e_initial = 0.0;
    double norm_before_scaling = 0.0;  // weighted data norm prior to normalize/eps
    bool theorem_regime = true;        // all terms null and delta in (0,1)
    std::optional<IdentityAccumulator::Result> identity;
    MonitorResult monitor;
};

/// Samples the data profiles onto the grid, applies normalization and the
/// amplitude factor, and checks the support margin (throws MarginError).
CharacteristicState initialize(const RunConfig& cfg, double* norm_before_scaling = nullptr);

/// Advances one step of size h = grid.h().  Throws StepFailure when a
/// corrector cell fails to converge and NumericalFailure on non-finite values.
void step(CharacteristicState& s, const Grid& grid, const NonlinearitySpec& spec);

/// d_x p and d_x q for every field (centered inside, one-sided at the ends).
void commuted_derivatives(const CharacteristicState& s, const Grid& grid,
                          std::vector<std::vector<double>>& dp,
                          std::vector<std::vector<double>>& dq);

/// Full run: initialize, march to t_final, record a report every cadence
/// stride (always including t = 0 and the final time), run the monitors.
/// With cfg.blowup_as_event, corrector/NaN failures and threshold crossings
/// end the run and are reported in RunResult::blowup instead of propagating.
RunResult run(const RunConfig& cfg);

/// Linear reference solution eps * [ (F(x+t) + F(x-t))/2 + (G1(x+t) - G1(x-t))/2 ]
/// with G1 an antiderivative of g, evaluated per field.  Uses the closed-form
/// antiderivative where the profile has one and adaptive quadrature otherwise.
double dalembert_reference(const FieldProfile& field, double eps, double t, double x);

} // namespace nullwave

#endif
