#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chkp/stepper.hpp"

#include <cmath>
#include <complex>

using namespace chkp;

namespace {

const double pi = 3.14159265358979323846;

std::shared_ptr<const Grid> square_grid(int n, double l) {
    return std::make_shared<Grid>(n, n, l, l);
}

double max_diff(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

} // namespace

TEST_CASE("linear phase speed of a small oblique mode") {
    auto g = square_grid(16, 2 * pi);
    ModelParams p{1.0, make_classical(1.0)};
    const double amp = 1e-8;
    SpectralField u = SpectralField::from_function(
        g, [&](double x, double y) { return amp * std::cos(x + y); });

    auto coeff = [&](const SpectralField& f) {
        // mode (xi=1, eta=1)
        return f.spectrum()[static_cast<std::size_t>(1) * g->nxh() + 1];
    };
    std::complex<double> c0 = coeff(u);
    const double dt = 0.01;
    const int n = 200;
    double phase = 0.0;
    std::complex<double> prev = c0;
    for (int i = 0; i < n; ++i) {
        u = step(u, p, dt);
        std::complex<double> c = coeff(u);
        phase += std::arg(c / prev); // increments are small, no wrap issues
        prev = c;
    }
    // linearized symbol gives omega = (kappa*xi + eta^2/xi) / (1 + xi^2) = 1
    double omega = -phase / (n * dt);
    CHECK(omega == doctest::Approx(1.0).epsilon(1e-6));
    // amplitude preserved by the linear dynamics
    CHECK(std::abs(prev) == doctest::Approx(std::abs(c0)).epsilon(1e-6));
}

TEST_CASE("step halving shows fourth order") {
    auto g = square_grid(32, 2 * pi);
    ModelParams p{1.0, make_classical(1.0)};
    SpectralField u0 = SpectralField::from_function(g, [](double x, double y) {
        return 0.2 * std::sin(x) + 0.1 * std::cos(x + y);
    });
    u0 = project_xmean(dealias(u0));

    auto advance = [&](double dt, int n) {
        SpectralField u = u0;
        for (int i = 0; i < n; ++i) u = step(u, p, dt);
        return u;
    };
    const double T = 0.4;
    SpectralField a = advance(T / 8, 8);
    SpectralField b = advance(T / 16, 16);
    SpectralField c = advance(T / 32, 32);
    double d1 = max_diff(a, b);
    double d2 = max_diff(b, c);
    double order = std::log2(d1 / d2);
    CHECK(order > 3.5);
    CHECK(order < 4.6);
}

TEST_CASE("energy conservation on a smooth run") {
    auto g = square_grid(48, 4 * pi);
    ModelParams p{1.0, make_quadratic_pure()};
    SpectralField u0 = SpectralField::from_function(g, [](double x, double y) {
        return 0.05 * std::sin(x) * (1.0 + 0.2 * std::cos(y / 2));
    });
    StepperConfig cfg;
    cfg.dt0 = 0.02;
    cfg.t_end = 1.0;
    RunResult res = run(u0, p, cfg);
    REQUIRE(res.stop.kind == StopKind::horizon_reached);
    double e0 = res.diags.front().conserved;
    double drift = 0.0;
    for (const auto& d : res.diags) drift = std::max(drift, std::abs(d.conserved - e0));
    CHECK(drift / e0 < 1e-10);
    CHECK(res.diags.back().t == doctest::Approx(1.0).epsilon(1e-9));
    // energy_e is half the conserved quantity
    CHECK(res.diags.front().energy_e == doctest::Approx(0.5 * e0));
}

TEST_CASE("stop reasons") {
    auto g = square_grid(32, 2 * pi);
    ModelParams p{1.0, make_quadratic_pure()};
    SpectralField u0 = SpectralField::from_function(
        g, [](double x, double) { return 0.5 * std::sin(x); });

    SUBCASE("horizon") {
        StepperConfig cfg;
        cfg.t_end = 0.1;
        RunResult r = run(u0, p, cfg);
        CHECK(r.stop.kind == StopKind::horizon_reached);
        CHECK(r.stop.t_stop == doctest::Approx(0.1).epsilon(1e-9));
    }
    SUBCASE("gradient threshold") {
        StepperConfig cfg;
        cfg.t_end = 5.0;
        cfg.grad_stop = 0.6; // initial grad is 0.5, mild steepening crosses this
        RunResult r = run(u0, p, cfg);
        CHECK(r.stop.kind == StopKind::gradient_threshold);
        CHECK(r.diags.back().grad_inf >= 0.6);
        CHECK(r.stop.t_stop < 5.0);
    }
    SUBCASE("step floor") {
        StepperConfig cfg;
        cfg.t_end = 1.0;
        cfg.c_g = 1e-6;      // forces dt ~ 2e-6
        cfg.dt_floor = 1e-4; // below the forced dt
        RunResult r = run(u0, p, cfg);
        CHECK(r.stop.kind == StopKind::step_floor);
        CHECK(r.stop.t_stop == 0.0);
    }
}

TEST_CASE("snapshot and diagnostic cadence") {
    auto g = square_grid(32, 2 * pi);
    ModelParams p{1.0, make_quadratic_pure()};
    SpectralField u0 = SpectralField::from_function(
        g, [](double x, double) { return 0.1 * std::sin(x); });
    StepperConfig cfg;
    cfg.dt0 = 0.05;
    cfg.t_end = 0.5;
    cfg.snapshot_every = 2;
    cfg.diag_every = 1;
    RunResult r = run(u0, p, cfg);
    // 10 steps: initial snapshot + every 2nd step + final
    CHECK(r.traj.snapshots().size() == 6);
    CHECK(r.diags.size() == 11);
    for (std::size_t i = 1; i < r.traj.snapshots().size(); ++i)
        CHECK(r.traj.snapshots()[i].t > r.traj.snapshots()[i - 1].t);
}

TEST_CASE("trajectory interval lookup") {
    Trajectory tr;
    auto g = square_grid(8, 2 * pi);
    for (double t : {0.0, 1.0, 2.0, 4.0}) tr.add(t, SpectralField(g));
    CHECK(tr.interval(-1.0) == 0);
    CHECK(tr.interval(0.5) == 0);
    CHECK(tr.interval(1.0) == 1);
    CHECK(tr.interval(3.0) == 2);
    CHECK(tr.interval(10.0) == 2);
}

TEST_CASE("blowup integral matches the streaming accumulator") {
    auto g = square_grid(32, 2 * pi);
    ModelParams p{1.0, make_quadratic_pure()};
    SpectralField u0 = SpectralField::from_function(
        g, [](double x, double) { return 0.3 * std::sin(x); });
    StepperConfig cfg;
    cfg.dt0 = 0.02;
    cfg.t_end = 0.5;
    RunResult r = run(u0, p, cfg);
    std::vector<double> integ = blowup_integral(r.diags);
    REQUIRE(integ.size() == r.diags.size());
    for (std::size_t i = 0; i < integ.size(); ++i)
        CHECK(integ[i] == doctest::Approx(r.diags[i].blowup_i).epsilon(1e-14));
    CHECK(integ.back() > 0.0);

    // hand trapezoid on a synthetic stream
    std::vector<DiagnosticRecord> d(3);
    d[0].t = 0.0; d[0].grad_inf = 1.0;
    d[1].t = 1.0; d[1].grad_inf = 2.0;
    d[2].t = 3.0; d[2].grad_inf = 1.0;
    auto v = blowup_integral(d);
    CHECK(v[1] == doctest::Approx(2.5));
    CHECK(v[2] == doctest::Approx(7.5));
    CHECK_THROWS(blowup_integral({}));
}
