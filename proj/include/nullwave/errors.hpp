#ifndef NULLWAVE_ERRORS_HPP
#define NULLWAVE_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace nullwave {

/// Configuration rejected; carries every violation found, not just the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid configuration:";
        for (const auto& m : v) s += "\n  " + m;
        return s;
    }
    std::vector<std::string> violations_;
};

/// Initial data support too close to the boundary for the domain of dependence.
class MarginError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Corrector failed to converge within the iteration cap.
class StepFailure : public std::runtime_error {
public:
    StepFailure(double t, int cell, const std::string& what)
        : std::runtime_error(what), t_(t), cell_(cell) {}
    double t() const { return t_; }
    int cell() const { return cell_; }

private:
    double t_;
    int cell_;
};

/// Non-finite value produced while advancing the state.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(double t, int cell, const std::string& what)
        : std::runtime_error(what), t_(t), cell_(cell) {}
    double t() const { return t_; }
    int cell() const { return cell_; }

private:
    double t_;
    int cell_;
};

/// Initial energy is zero but the state grows later; the monitor ratio is undefined.
class DegenerateDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Data integral diverged or the adaptive quadrature failed to converge.
class HypothesisViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nullwave

#endif
