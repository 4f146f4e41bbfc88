#ifndef NULLWAVE_STATE_HPP
#define NULLWAVE_STATE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

namespace nullwave {

/// Discrete state on one time slice t = step * h.
///
/// Per field: phi and the null-frame gradient pair p = L phi, q = Lbar phi.
/// p rides left-going characteristics (ubar constant), q right-going ones
/// (u constant); with dt = h both move exactly one cell per step.
struct CharacteristicState {
    long long step = 0;
    double t = 0.0;
    int m = 0;

    std::vector<std::vector<double>> phi;
    std::vector<std::vector<double>> p;
    std::vector<std::vector<double>> q;

    int n_fields() const { return static_cast<int>(p.size()); }

    static CharacteristicState zeros(int n_fields, int m) {
        CharacteristicState s;
        s.m = m;
        s.phi.assign(n_fields, std::vector<double>(m, 0.0));
        s.p.assign(n_fields, std::vector<double>(m, 0.0));
        s.q.assign(n_fields, std::vector<double>(m, 0.0));
        return s;
    }

    double max_abs_pq() const {
        double r = 0.0;
        for (const auto& a : p)
            for (double v : a) r = std::max(r, std::fabs(v));
        for (const auto& a : q)
            for (double v : a) r = std::max(r, std::fabs(v));
        return r;
    }
};

} // namespace nullwave

#endif
