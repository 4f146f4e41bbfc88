#ifndef NULLWAVE_RUN_CONFIG_HPP
#define NULLWAVE_RUN_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "nullwave/data.hpp"
#include "nullwave/grid.hpp"
#include "nullwave/nullform.hpp"

namespace nullwave {

struct MonitorConfig {
    double ratio_threshold = 4.0;   // pass while (E+F)/E(0) <= this
    double blowup_factor = 1e6;     // threshold = factor * initial max |p|,|q|
    std::optional<double> identity_ubar;  // run the energy identity on this diagonal
};

struct RunConfig {
    Grid grid;
    double t_final = 0.0;
    double cadence = 1.0;
    double delta = 0.5;
    double eps = 0.0;
    bool normalize_data = true;
    DataProfile data;
    NonlinearitySpec spec;
    MonitorConfig monitors;

    /// Convert step failures and non-finite values into a blow-up event
    /// instead of propagating the exception.
    bool blowup_as_event = true;

    /// Relative cutoff (vs initial amplitude) defining the numerical support
    /// for the boundary margin monitor.
    double support_tol_rel = 1e-14;

    long long steps() const {
        double h = grid.h();
        return static_cast<long long>(t_final / h + 0.5);
    }
    long long cadence_stride() const {
        double h = grid.h();
        long long s = static_cast<long long>(cadence / h + 0.5);
        return s < 1 ? 1 : s;
    }
};

/// All semantic problems with the config, empty when valid.
std::vector<std::string> validate(const RunConfig& cfg);

/// Throws ConfigError listing every violation.
void require_valid(const RunConfig& cfg);

} // namespace nullwave

#endif
