#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nullwave/config_parse.hpp"
#include "nullwave/csv.hpp"
#include "nullwave/errors.hpp"
#include "nullwave/experiments.hpp"
#include "nullwave/solver.hpp"

namespace fs = std::filesystem;
using namespace nullwave;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;   // monitor violation or unexpected blow-up
constexpr int kExitConfig = 2;      // usage, config, or margin problems
constexpr int kExitNumerical = 3;   // solver or quadrature failure

struct CommonOpts {
    std::string config;
    std::string out;
    bool seedless = false;  // accepted for symmetry; every run is deterministic
    bool quiet = false;
};

void add_common(CLI::App* sub, CommonOpts& o, bool needs_out = true) {
    sub->add_option("--config", o.config, "Run configuration file")->required();
    if (needs_out) sub->add_option("--out", o.out, "Output directory (overrides [output])");
    sub->add_flag("--seedless", o.seedless,
                  "No-op: runs are deterministic and use no random numbers");
    sub->add_flag("--quiet", o.quiet, "Suppress progress output");
}

fs::path resolve_out(const ParsedConfig& pc, const CommonOpts& o) {
    std::string dir = !o.out.empty() ? o.out
                      : !pc.output.directory.empty() ? pc.output.directory
                                                     : std::string("out");
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << text;
}

void write_bytes(const fs::path& p, const std::vector<char>& bytes) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string run_summary(const ParsedConfig& pc, const RunResult& r) {
    std::ostringstream os;
    os << "status=" << (r.blowup ? "blowup" : "completed") << "\n";
    os << "t_reached=" << fmt_g17(r.final_state.t) << "\n";
    os << "steps=" << r.final_state.step << "\n";
    os << "m=" << pc.run.grid.m << "\n";
    os << "h=" << fmt_g17(pc.run.grid.h()) << "\n";
    os << "eps=" << fmt_g17(pc.run.eps) << "\n";
    os << "delta=" << fmt_g17(pc.run.delta) << "\n";
    os << "e_initial=" << fmt_g17(r.e_initial) << "\n";
    os << "norm_before_scaling=" << fmt_g17(r.norm_before_scaling) << "\n";
    os << "theorem_regime=" << (r.theorem_regime ? 1 : 0) << "\n";
    os << "max_ratio=" << fmt_g17(r.monitor.max_ratio) << "\n";
    os << "monitor_passed=" << (r.monitor.passed ? 1 : 0) << "\n";
    os << "monitor_vacuous=" << (r.monitor.vacuous ? 1 : 0) << "\n";
    if (r.monitor.first_violation_t)
        os << "first_violation_t=" << fmt_g17(*r.monitor.first_violation_t) << "\n";
    if (r.blowup) {
        os << "blowup_t=" << fmt_g17(r.blowup->t) << "\n";
        os << "blowup_cause=" << r.blowup->cause << "\n";
        os << "blowup_cell=" << r.blowup->cell << "\n";
    }
    if (r.identity) {
        os << "identity_q_side=" << fmt_g17(r.identity->q_side) << "\n";
        os << "identity_p_side=" << fmt_g17(r.identity->p_side) << "\n";
        os << "identity_total=" << fmt_g17(r.identity->total_abs()) << "\n";
    }
    if (!r.reports.empty()) {
        const EnergyReport& last = r.reports.back();
        os << "final_sup_wL=" << fmt_g17(last.sup_wL) << "\n";
        os << "final_sup_wLbar=" << fmt_g17(last.sup_wLbar) << "\n";
        os << "final_mixed_sup=" << fmt_g17(last.mixed_sup) << "\n";
    }
    return os.str();
}

int run_exit_code(const RunResult& r) {
    if (r.blowup || !r.monitor.passed) return kExitViolation;
    return kExitOk;
}

int cmd_simulate(const CommonOpts& o) {
    ParsedConfig pc = parse_config_file(o.config);
    RunResult r = run(pc.run);
    fs::path out = resolve_out(pc, o);
    write_text(out / "energy.csv", energy_csv(r.reports));
    write_text(out / "summary.txt", run_summary(pc, r));
    if (pc.output.snapshots) {
        if (pc.output.snapshot_format == "binary")
            write_bytes(out / "final_state.bin", snapshot_binary(r.final_state));
        else
            write_text(out / "final_state.csv", snapshot_csv(r.final_state, pc.run.grid));
    }
    if (!o.quiet) {
        std::cout << (r.blowup ? "blow-up at t = " + fmt_g17(r.blowup->t) + " (" +
                                     r.blowup->cause + ")"
                               : "completed t = " + fmt_g17(r.final_state.t))
                  << ", max ratio " << fmt_g17(r.monitor.max_ratio) << ", monitor "
                  << (r.monitor.passed ? "pass" : "VIOLATION") << "\n";
        std::cout << "wrote " << (out / "energy.csv").string() << "\n";
    }
    return run_exit_code(r);
}

int cmd_energy_report(const CommonOpts& o) {
    ParsedConfig pc = parse_config_file(o.config);
    RunResult r = run(pc.run);
    fs::path out = resolve_out(pc, o);
    write_text(out / "energy.csv", energy_csv(r.reports));

    WeightSpec w(pc.run.delta);
    double wint = inverse_sqrt_weight_integral(w);
    const EnergyReport& last = r.reports.back();

    double c3 = 0.0;
    for (const EnergyReport& rep : r.reports) {
        if (rep.mixed_l2_q > 0.0) c3 = std::max(c3, rep.mixed_sup_q / rep.mixed_l2_q);
        if (rep.mixed_l2_p > 0.0) c3 = std::max(c3, rep.mixed_sup_p / rep.mixed_l2_p);
    }

    bool flux_monotone = true;
    for (size_t i = 1; i < r.reports.size(); ++i)
        if (r.reports[i].f0 < r.reports[i - 1].f0 - 1e-12 ||
            r.reports[i].f1 < r.reports[i - 1].f1 - 1e-12)
            flux_monotone = false;

    std::ostringstream os;
    os << run_summary(pc, r);
    os << "flux_monotone=" << (flux_monotone ? 1 : 0) << "\n";
    os << "inverse_sqrt_weight_integral=" << fmt_g17(wint) << "\n";
    os << "st_k0=" << fmt_g17(last.st0) << "\n";
    os << "st_k1=" << fmt_g17(last.st1) << "\n";
    os << "st_k0_bound=" << fmt_g17(2.0 * last.f0_ubar_side * wint) << "\n";
    os << "st_k1_bound=" << fmt_g17(2.0 * last.f1_ubar_side * wint) << "\n";
    os << "mixed_sup_over_l2=" << fmt_g17(c3) << "\n";
    write_text(out / "report.txt", os.str());

    if (!o.quiet) {
        std::cout << "max ratio " << fmt_g17(r.monitor.max_ratio) << ", monitor "
                  << (r.monitor.passed ? "pass" : "VIOLATION") << ", flux "
                  << (flux_monotone ? "monotone" : "NOT monotone") << "\n";
        if (r.identity)
            std::cout << "identity residual " << fmt_g17(r.identity->total_abs()) << "\n";
        std::cout << "wrote " << (out / "report.txt").string() << "\n";
    }
    return run_exit_code(r);
}

// Blow-up inside a study is a finding, not an error; under a null-form spec it
// is a violation of the expected stable regime.
template <typename Fn>
int guard_study(const ParsedConfig& pc, bool quiet, Fn&& fn) {
    try {
        return fn();
    } catch (const StepFailure& e) {
        if (pc.run.spec.all_null(1e-12)) {
            if (!quiet)
                std::cerr << "unexpected blow-up under a null-form spec at t = "
                          << fmt_g17(e.t()) << "\n";
            return kExitViolation;
        }
        throw;
    } catch (const NumericalFailure& e) {
        if (pc.run.spec.all_null(1e-12)) {
            if (!quiet)
                std::cerr << "unexpected non-finite state under a null-form spec at t = "
                          << fmt_g17(e.t()) << "\n";
            return kExitViolation;
        }
        throw;
    }
}

int cmd_converge(const CommonOpts& o) {
    ParsedConfig pc = parse_config_file(o.config);
    if (pc.study.grid_sizes.empty())
        throw ConfigError({"study: converge needs grid_sizes in [study]"});
    return guard_study(pc, o.quiet, [&] {
        ConvergenceResult res = convergence_study(pc.run, pc.study.grid_sizes);
        fs::path out = resolve_out(pc, o);
        write_text(out / "convergence.csv", convergence_csv(res));
        if (!o.quiet) {
            std::cout << "reference: "
                      << (res.reference == ConvergenceReference::ClosedForm ? "closed-form"
                                                                            : "self-refined")
                      << "\n";
            for (const ConvergenceRung& g : res.rungs) {
                std::cout << "m = " << g.m << "  error = " << fmt_g17(g.error);
                if (g.order) std::cout << "  order = " << fmt_g17(*g.order);
                std::cout << "\n";
            }
            std::cout << "wrote " << (out / "convergence.csv").string() << "\n";
        }
        return kExitOk;
    });
}

int cmd_blowup_compare(const CommonOpts& o) {
    ParsedConfig pc = parse_config_file(o.config);
    BlowupDetection det = detect_blowup(pc.run);
    std::optional<double> oracle = ode_blowup_time(pc.run);

    fs::path out = resolve_out(pc, o);
    std::ostringstream os;
    os << "blew_up=" << (det.blew_up ? 1 : 0) << "\n";
    os << "t_coarse=" << fmt_g17(det.t_coarse) << "\n";
    os << "t_fine=" << fmt_g17(det.t_fine) << "\n";
    os << "estimate=" << fmt_g17(det.estimate) << "\n";
    os << "cause=" << (det.cause.empty() ? "none" : det.cause) << "\n";
    os << "low_confidence=" << (det.low_confidence ? 1 : 0) << "\n";
    if (oracle) {
        os << "oracle=" << fmt_g17(*oracle) << "\n";
        if (*oracle > 0.0)
            os << "rel_error_vs_oracle=" << fmt_g17((det.estimate - *oracle) / *oracle) << "\n";
    }
    write_text(out / "blowup.txt", os.str());

    if (!o.quiet) {
        if (det.blew_up)
            std::cout << "blow-up: coarse t = " << fmt_g17(det.t_coarse) << ", fine t = "
                      << fmt_g17(det.t_fine)
                      << (det.low_confidence ? " (low confidence)" : "") << "\n";
        else
            std::cout << "no blow-up before t = " << fmt_g17(pc.run.t_final) << "\n";
        if (oracle) std::cout << "predicted t = " << fmt_g17(*oracle) << "\n";
        std::cout << "wrote " << (out / "blowup.txt").string() << "\n";
    }
    return det.blew_up && pc.run.spec.all_null(1e-12) ? kExitViolation : kExitOk;
}

int cmd_increment_scaling(const CommonOpts& o) {
    ParsedConfig pc = parse_config_file(o.config);
    if (pc.study.eps_values.empty())
        throw ConfigError({"study: increment-scaling needs eps_values in [study]"});
    return guard_study(pc, o.quiet, [&] {
        IncrementScalingResult res = increment_scaling(pc.run, pc.study.eps_values);
        fs::path out = resolve_out(pc, o);
        write_text(out / "scaling.csv", increment_scaling_csv(res));
        if (!o.quiet) {
            for (const IncrementScalingRow& row : res.rows) {
                std::cout << "eps = " << fmt_g17(row.eps) << "  delta = "
                          << fmt_g17(row.delta_sup);
                if (row.nu) std::cout << "  nu = " << fmt_g17(*row.nu);
                if (!row.conclusive) std::cout << "  (below rounding floor)";
                std::cout << "\n";
            }
            std::cout << "wrote " << (out / "scaling.csv").string() << "\n";
        }
        return kExitOk;
    });
}

int cmd_lifespan(const CommonOpts& o) {
    ParsedConfig pc = parse_config_file(o.config);
    if (pc.study.eps_values.empty())
        throw ConfigError({"study: lifespan needs eps_values in [study]"});
    LifespanResult res = lifespan_sweep(pc.run, pc.study.eps_values, pc.study.t_caps);
    fs::path out = resolve_out(pc, o);
    write_text(out / "lifespan.csv", lifespan_csv(res));
    bool any_blowup = false;
    for (const LifespanEntry& e : res.entries) any_blowup = any_blowup || !e.censored;
    if (!o.quiet) {
        for (const LifespanEntry& e : res.entries)
            std::cout << "eps = " << fmt_g17(e.eps) << "  t* = " << fmt_g17(e.t_star)
                      << (e.censored ? " (censored)" : "") << "\n";
        for (double r : res.ratios) std::cout << "halving ratio " << fmt_g17(r) << "\n";
        std::cout << "wrote " << (out / "lifespan.csv").string() << "\n";
    }
    return any_blowup && pc.run.spec.all_null(1e-12) ? kExitViolation : kExitOk;
}

int cmd_check_null(const CommonOpts& o) {
    ParsedConfig pc = parse_config_file(o.config);
    std::cout << (pc.run.spec.all_null(1e-12) ? "null" : "non-null") << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Characteristic simulator for 1+1D semilinear wave systems"};
    app.require_subcommand(1);

    CommonOpts o_sim, o_rep, o_conv, o_blow, o_inc, o_life, o_null;
    CLI::App* c_sim = app.add_subcommand("simulate", "Run one simulation and write energy.csv");
    add_common(c_sim, o_sim);
    CLI::App* c_rep = app.add_subcommand(
        "energy-report", "Run one simulation and write the estimate checks to report.txt");
    add_common(c_rep, o_rep);
    CLI::App* c_conv =
        app.add_subcommand("converge", "Grid-refinement study using [study] grid_sizes");
    add_common(c_conv, o_conv);
    CLI::App* c_blow = app.add_subcommand(
        "blowup-compare", "Detect blow-up on the configured and a refined grid");
    add_common(c_blow, o_blow);
    CLI::App* c_inc = app.add_subcommand(
        "increment-scaling", "Nonlinear energy increment versus amplitude");
    add_common(c_inc, o_inc);
    CLI::App* c_life =
        app.add_subcommand("lifespan", "Observed lifespan over [study] eps_values");
    add_common(c_life, o_life);
    CLI::App* c_null =
        app.add_subcommand("check-null", "Print whether the configured spec is a null form");
    add_common(c_null, o_null, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (c_sim->parsed()) return cmd_simulate(o_sim);
        if (c_rep->parsed()) return cmd_energy_report(o_rep);
        if (c_conv->parsed()) return cmd_converge(o_conv);
        if (c_blow->parsed()) return cmd_blowup_compare(o_blow);
        if (c_inc->parsed()) return cmd_increment_scaling(o_inc);
        if (c_life->parsed()) return cmd_lifespan(o_life);
        if (c_null->parsed()) return cmd_check_null(o_null);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const MarginError& e) {
        std::cerr << "margin error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DegenerateDataError& e) {
        std::cerr << "degenerate data: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const StepFailure& e) {
        std::cerr << "step failure: " << e.what() << " (t = " << fmt_g17(e.t()) << ")\n";
        return kExitNumerical;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << " (t = " << fmt_g17(e.t()) << ")\n";
        return kExitNumerical;
    } catch (const HypothesisViolation& e) {
        std::cerr << "hypothesis violation: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}
