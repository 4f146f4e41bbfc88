#ifndef NULLWAVE_CSV_HPP
#define NULLWAVE_CSV_HPP

#include <string>
#include <vector>

#include "nullwave/energy.hpp"
#include "nullwave/experiments.hpp"
#include "nullwave/state.hpp"

// Deterministic text output: every floating-point value is printed with
// %.17g so that identical runs produce byte-identical files.

namespace nullwave {

std::string fmt_g17(double v);

extern const char* const kEnergyCsvHeader;

std::string energy_csv(const std::vector<EnergyReport>& reports);
std::string snapshot_csv(const CharacteristicState& s, const Grid& g);
std::vector<char> snapshot_binary(const CharacteristicState& s);

std::string convergence_csv(const ConvergenceResult& r);
std::string increment_scaling_csv(const IncrementScalingResult& r);
std::string lifespan_csv(const LifespanResult& r);

} // namespace nullwave

#endif
