#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "nullwave/errors.hpp"
#include "nullwave/solver.hpp"

using namespace nullwave;

namespace {

RunConfig right_mover_config() {
    RunConfig cfg;
    cfg.grid = Grid(-15.0, 15.0, 301);  // h = 0.1
    cfg.t_final = 3.0;
    cfg.cadence = 1.0;
    cfg.delta = 0.5;
    cfg.eps = 0.1;
    cfg.normalize_data = false;
    FieldProfile fld;
    fld.f = ProfileFn::gaussian(0.0, 1.0, 1.0);
    fld.g = ProfileFn::zero();
    fld.g_is_minus_f_prime = true;
    cfg.data.fields.push_back(fld);
    cfg.spec = NonlinearitySpec::linear(1);
    return cfg;
}

} // namespace

TEST_CASE("initialize produces p = eps(G + F'), q = eps(G - F')") {
    RunConfig cfg;
    cfg.grid = Grid(-20.0, 20.0, 401);
    cfg.t_final = 1.0;
    cfg.eps = 0.25;
    cfg.normalize_data = false;
    FieldProfile fld;
    fld.f = ProfileFn::gaussian(1.0, 2.0, 0.8);
    fld.g = ProfileFn::gaussian(-0.5, 1.5, 0.3);
    cfg.data.fields.push_back(fld);
    cfg.spec = NonlinearitySpec::linear(1);

    double norm = 0.0;
    CharacteristicState s = initialize(cfg, &norm);
    CHECK(norm > 0.0);
    CHECK(s.m == 401);
    CHECK(s.n_fields() == 1);
    for (int j : {0, 57, 200, 311, 400}) {
        double x = cfg.grid.x(j);
        CHECK(s.p[0][j] == cfg.eps * (fld.g.value(x) + fld.f.deriv(x)));
        CHECK(s.q[0][j] == cfg.eps * (fld.g.value(x) - fld.f.deriv(x)));
        CHECK(s.phi[0][j] == cfg.eps * fld.f.value(x));
    }
}

TEST_CASE("linear right mover transports bit-exactly") {
    RunConfig cfg = right_mover_config();
    CharacteristicState s = initialize(cfg);
    CharacteristicState s0 = s;

    for (int j = 0; j < s.m; ++j) CHECK(s.p[0][j] == 0.0);  // G = -F' kills p

    const int n_steps = 30;
    for (int k = 0; k < n_steps; ++k) step(s, cfg.grid, cfg.spec);
    CHECK(s.step == n_steps);
    CHECK(s.t == doctest::Approx(3.0).epsilon(1e-14));

    for (int j = 0; j < s.m; ++j) {
        CHECK(s.p[0][j] == 0.0);
        double expect = (j >= n_steps) ? s0.q[0][j - n_steps] : 0.0;
        CHECK(s.q[0][j] == expect);  // exact shift, no arithmetic applied
    }

    // phi integrates d_t phi = (p+q)/2 by the trapezoid rule; compare with
    // the translated profile it converges to.
    double worst = 0.0;
    for (int j = 0; j < s.m; ++j) {
        double exact = dalembert_reference(cfg.data.fields[0], cfg.eps, 3.0, cfg.grid.x(j));
        worst = std::max(worst, std::fabs(s.phi[0][j] - exact));
    }
    CHECK(worst < 5e-4);
}

TEST_CASE("null nonlinearity leaves a one-sided state on the exact branch") {
    RunConfig cfg = right_mover_config();
    cfg.spec = NonlinearitySpec(1);
    cfg.spec.add_null_term(0, 0, 0, 1.0, 0.0);  // N = L phi Lbar phi

    CharacteristicState s = initialize(cfg);
    CharacteristicState s0 = s;
    for (int k = 0; k < 12; ++k) step(s, cfg.grid, cfg.spec);
    for (int j = 0; j < s.m; ++j) {
        CHECK(s.p[0][j] == 0.0);
        CHECK(s.q[0][j] == ((j >= 12) ? s0.q[0][j - 12] : 0.0));
    }
}

TEST_CASE("corrector divergence raises StepFailure and leaves the state intact") {
    RunConfig cfg;
    cfg.grid = Grid(-20.0, 20.0, 401);  // h = 0.1
    cfg.t_final = 1.0;
    cfg.eps = 25.0;
    cfg.normalize_data = false;
    FieldProfile fld;
    fld.f = ProfileFn::zero();
    fld.g = ProfileFn::plateau(1.0, 3.0, 2.0);
    cfg.data.fields.push_back(fld);
    cfg.spec = NonlinearitySpec(1);
    cfg.spec.add_null_term(0, 0, 0, 1.0, 0.0);
    cfg.blowup_as_event = false;

    CharacteristicState s = initialize(cfg);
    CharacteristicState before = s;
    CHECK_THROWS_AS(step(s, cfg.grid, cfg.spec), StepFailure);
    // the failed step must not have touched the state
    CHECK(s.step == before.step);
    CHECK(s.t == before.t);
    CHECK(s.p == before.p);
    CHECK(s.q == before.q);
    CHECK(s.phi == before.phi);

    // as an event instead of an exception
    cfg.blowup_as_event = true;
    RunResult r = run(cfg);
    REQUIRE(r.blowup.has_value());
    CHECK(r.blowup->cause == "corrector");
    CHECK_FALSE(r.reports.empty());
}

TEST_CASE("non-finite values raise NumericalFailure") {
    Grid g(-10.0, 10.0, 201);
    NonlinearitySpec spec(1);
    spec.add_null_term(0, 0, 0, 0.5, 0.5);
    CharacteristicState s = CharacteristicState::zeros(1, 201);
    for (int j = 0; j < 201; ++j) s.p[0][j] = s.q[0][j] = 1e-3;
    s.q[0][100] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(step(s, g, spec), NumericalFailure);
}

TEST_CASE("run honors the report cadence") {
    RunConfig cfg;
    cfg.grid = Grid(-20.0, 20.0, 801);  // h = 0.05
    cfg.t_final = 2.0;
    cfg.cadence = 0.5;
    cfg.eps = 0.1;
    cfg.normalize_data = true;
    FieldProfile fld;
    fld.f = ProfileFn::gaussian(0.0, 1.0, 1.0);
    fld.g = ProfileFn::zero();
    cfg.data.fields.push_back(fld);
    cfg.spec = NonlinearitySpec::linear(1);

    RunResult r = run(cfg);
    REQUIRE(r.reports.size() == 5);  // t = 0, 0.5, 1.0, 1.5, 2.0
    CHECK(r.reports.front().t == 0.0);
    CHECK(r.reports.back().t == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r.reports[1].t == doctest::Approx(0.5).epsilon(1e-13));
    CHECK_FALSE(r.blowup.has_value());
    CHECK(r.monitor.passed);
    CHECK_FALSE(r.monitor.vacuous);
    CHECK(r.theorem_regime);
    CHECK(r.final_state.step == 40);
    CHECK(r.e_initial > 0.0);
    CHECK(r.norm_before_scaling == doctest::Approx(27.413112579128253).epsilon(1e-8));
}

TEST_CASE("zero amplitude gives a vacuous monitor") {
    RunConfig cfg = right_mover_config();
    cfg.eps = 0.0;
    RunResult r = run(cfg);
    CHECK(r.monitor.vacuous);
    CHECK(r.monitor.passed);
    CHECK(r.e_initial == 0.0);
    CHECK_FALSE(r.blowup.has_value());
}

TEST_CASE("d'Alembert reference") {
    FieldProfile fld;
    fld.f = ProfileFn::gaussian(0.0, 1.0, 1.0);
    fld.g = ProfileFn::zero();
    fld.g_is_minus_f_prime = true;

    // right mover: exactly eps F(x - t)
    for (double t : {0.0, 1.5, 4.0})
        for (double x : {-2.0, 0.0, 0.7, 3.0})
            CHECK(dalembert_reference(fld, 0.3, t, x) == 0.3 * fld.f.value(x - t));

    // generic data: t = 0 recovers eps F, and the residual of the wave
    // equation vanishes to FD accuracy
    FieldProfile gen;
    gen.f = ProfileFn::gaussian(0.5, 1.2, 0.9);
    gen.g = ProfileFn::compact_bump(-0.3, 2.0, 0.6);  // exercises the quadrature path
    CHECK(dalembert_reference(gen, 0.2, 0.0, 1.1) ==
          doctest::Approx(0.2 * gen.f.value(1.1)).epsilon(1e-12));

    auto u = [&](double t, double x) { return dalembert_reference(gen, 0.2, t, x); };
    double fh = 1e-4;
    for (double t : {0.5, 1.25})
        for (double x : {-0.8, 0.3, 1.9}) {
            double utt = (u(t + fh, x) - 2.0 * u(t, x) + u(t - fh, x)) / (fh * fh);
            double uxx = (u(t, x + fh) - 2.0 * u(t, x) + u(t, x - fh)) / (fh * fh);
            CHECK(utt - uxx == doctest::Approx(0.0).scale(1.0).epsilon(1e-4));
        }
}
