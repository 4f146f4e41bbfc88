#include "nullwave/csv.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <sstream>

namespace nullwave {

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const char* const kEnergyCsvHeader =
    "t,e0,e1,f0,f1,e_total,f_total,ratio,sup_wL,sup_wLbar,mixed_sup,st_int_k0,st_int_k1";

std::string energy_csv(const std::vector<EnergyReport>& reports) {
    std::ostringstream os;
    os << kEnergyCsvHeader << "\n";
    for (const EnergyReport& r : reports) {
        os << fmt_g17(r.t) << ',' << fmt_g17(r.e0) << ',' << fmt_g17(r.e1) << ','
           << fmt_g17(r.f0) << ',' << fmt_g17(r.f1) << ',' << fmt_g17(r.e_total) << ','
           << fmt_g17(r.f_total) << ',' << fmt_g17(r.ratio) << ',' << fmt_g17(r.sup_wL) << ','
           << fmt_g17(r.sup_wLbar) << ',' << fmt_g17(r.mixed_sup) << ',' << fmt_g17(r.st0)
           << ',' << fmt_g17(r.st1) << "\n";
    }
    return os.str();
}

std::string snapshot_csv(const CharacteristicState& s, const Grid& g) {
    std::ostringstream os;
    os << "j,x,field,phi,p,q\n";
    for (int i = 0; i < s.n_fields(); ++i)
        for (int j = 0; j < s.m; ++j)
            os << j << ',' << fmt_g17(g.x(j)) << ',' << (i + 1) << ','
               << fmt_g17(s.phi[i][j]) << ',' << fmt_g17(s.p[i][j]) << ','
               << fmt_g17(s.q[i][j]) << "\n";
    return os.str();
}

std::vector<char> snapshot_binary(const CharacteristicState& s) {
    // Layout: int64 n_fields, int64 m, float64 t, then per field phi, p, q
    // arrays of m little-endian float64 values each.
    std::vector<char> out;
    auto put = [&](const void* p, size_t n) {
        const char* c = static_cast<const char*>(p);
        out.insert(out.end(), c, c + n);
    };
    int64_t n = s.n_fields(), m = s.m;
    put(&n, sizeof n);
    put(&m, sizeof m);
    put(&s.t, sizeof s.t);
    for (int i = 0; i < s.n_fields(); ++i) {
        put(s.phi[i].data(), s.phi[i].size() * sizeof(double));
        put(s.p[i].data(), s.p[i].size() * sizeof(double));
        put(s.q[i].data(), s.q[i].size() * sizeof(double));
    }
    return out;
}

std::string convergence_csv(const ConvergenceResult& r) {
    std::ostringstream os;
    os << "m,h,error,order\n";
    for (const ConvergenceRung& g : r.rungs) {
        os << g.m << ',' << fmt_g17(g.h) << ',' << fmt_g17(g.error) << ',';
        if (g.order) os << fmt_g17(*g.order);
        os << "\n";
    }
    return os.str();
}

std::string increment_scaling_csv(const IncrementScalingResult& r) {
    std::ostringstream os;
    os << "eps,delta_sup,nu,conclusive\n";
    for (const IncrementScalingRow& row : r.rows) {
        os << fmt_g17(row.eps) << ',' << fmt_g17(row.delta_sup) << ',';
        if (row.nu) os << fmt_g17(*row.nu);
        os << ',' << (row.conclusive ? 1 : 0) << "\n";
    }
    return os.str();
}

std::string lifespan_csv(const LifespanResult& r) {
    std::ostringstream os;
    os << "eps,t_star,censored\n";
    for (const LifespanEntry& e : r.entries)
        os << fmt_g17(e.eps) << ',' << fmt_g17(e.t_star) << ',' << (e.censored ? 1 : 0) << "\n";
    return os.str();
}

} // namespace nullwave
