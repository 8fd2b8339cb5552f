#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chkp/breaking.hpp"

#include <cmath>
#include <limits>

using namespace chkp;

namespace {

const double pi = 3.14159265358979323846;

std::shared_ptr<const Grid> square_grid(int n, double l) {
    return std::make_shared<Grid>(n, n, l, l);
}

// Trajectory of identical snapshots: the advecting field is frozen in time.
Trajectory frozen(std::shared_ptr<const Grid> g,
                  const std::function<double(double, double)>& f, double t_end, int n) {
    Trajectory tr;
    SpectralField u = SpectralField::from_function(g, f);
    for (int i = 0; i <= n; ++i) tr.add(t_end * i / n, u);
    return tr;
}

} // namespace

TEST_CASE("characteristic through a frozen field") {
    auto g = square_grid(64, 2 * pi);
    ModelParams p{1.0, make_quadratic_pure()};
    Trajectory tr = frozen(g, [](double x, double) { return std::sin(x); }, 1.0, 50);

    CharacteristicTrace trace = track(tr, p, pi / 2, 0.0);
    REQUIRE(trace.samples.size() == 51);
    // dq/dt = sin(q), q(0) = pi/2 has q(t) = 2 atan(e^t)
    for (std::size_t i : {10u, 25u, 50u}) {
        double t = trace.samples[i].t;
        CHECK(trace.samples[i].q == doctest::Approx(2.0 * std::atan(std::exp(t))).epsilon(1e-6));
        CHECK(trace.samples[i].w ==
              doctest::Approx(std::cos(trace.samples[i].q)).epsilon(1e-6));
    }
    CHECK(trace.samples.back().q == doctest::Approx(2.0 * std::atan(std::exp(1.0))).epsilon(1e-6));

    // a stationary point of u stays put
    CharacteristicTrace fixed = track(tr, p, pi, 0.0);
    CHECK(fixed.samples.back().q == doctest::Approx(pi).epsilon(1e-10));
    CHECK(fixed.samples.back().w == doctest::Approx(-1.0).epsilon(1e-10));

    // y0 snaps to the nearest grid row
    CharacteristicTrace snapped = track(tr, p, 0.0, g->dy() * 0.4);
    CHECK(snapped.y0 == doctest::Approx(0.0));

    SUBCASE("sparse cadence is rejected") {
        Trajectory coarse = frozen(g, [](double x, double) { return 5.0 * std::sin(x); }, 2.0, 2);
        CHECK_THROWS(track(coarse, p, 0.0, 0.0));
    }
}

TEST_CASE("slope ODE residual is small on a real run") {
    auto g = std::make_shared<Grid>(256, 8, 2 * pi, 2 * pi);
    ModelParams p{1.0, make_quadratic_pure()};
    SpectralField u0 = SpectralField::from_function(
        g, [](double x, double) { return -0.3 * std::sin(x); });
    StepperConfig cfg;
    cfg.dt0 = 0.01;
    cfg.t_end = 1.0;
    cfg.snapshot_every = 1;
    RunResult res = run(u0, p, cfg);
    REQUIRE(res.stop.kind == StopKind::horizon_reached);

    CharacteristicTrace trace = track(res.traj, p, 0.0, 0.0);
    std::vector<double> resid = verify_riccati_ode(trace, p.gamma);
    double worst = 0.0;
    for (double r : resid) worst = std::max(worst, std::abs(r));
    CHECK(worst < 1e-3);
    // terms themselves are not small, so the cancellation is real
    CHECK(std::abs(trace.samples.front().w) > 0.29);
}

TEST_CASE("empirical K windows") {
    CharacteristicTrace tr;
    tr.samples = {{0.0, 0.0, -1.0, 0.1},
                  {1.0, 0.0, -2.0, 0.3},
                  {2.0, 0.0, -6.0, 5.0}};
    CHECK(empirical_K(tr) == doctest::Approx(5.0));
    CHECK(empirical_K(tr, -3.0) == doctest::Approx(0.3)); // stops before the blown-up tail
    CHECK(empirical_K(tr, -1.5) == doctest::Approx(0.1));
}

TEST_CASE("blow-up time closed form") {
    RiccatiBound b = t_star_bound(-2.0, 1.0, 1.0);
    REQUIRE(b.t_star.has_value());
    CHECK(*b.t_star == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-12));

    // K -> 0 limit is 1/(gamma |m0|)
    RiccatiBound lim = t_star_bound(-2.0, 1e-12, 1.0);
    REQUIRE(lim.t_star.has_value());
    CHECK(*lim.t_star == doctest::Approx(0.5).epsilon(1e-5));
    RiccatiBound zero = t_star_bound(-2.0, 0.0, 1.0);
    REQUIRE(zero.t_star.has_value());
    CHECK(*zero.t_star == doctest::Approx(0.5).epsilon(1e-14));

    CHECK_FALSE(t_star_bound(-0.5, 1.0, 1.0).t_star.has_value());
    CHECK_FALSE(t_star_bound(1.0, 0.0, 1.0).t_star.has_value());
    CHECK_THROWS(t_star_bound(-1.0, -1.0, 1.0));
    CHECK_THROWS(t_star_bound(-1.0, 1.0, 0.0));

    // gamma scaling: t*(m0, K, gamma) = t*(m0*c, K*c^2, gamma/c)/c ... sanity
    RiccatiBound s = t_star_bound(-4.0, 4.0, 1.0);
    CHECK(*s.t_star == doctest::Approx(0.25 * std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("riccati envelope against an ODE integration") {
    const double psi0 = 2.0, k = 1.0, gamma = 1.0;
    // dpsi/dt = gamma psi^2 - K integrated with RK4
    double psi = psi0, t = 0.0;
    const double h = 1e-5;
    auto f = [&](double y) { return gamma * y * y - k; };
    while (t < 0.3 - 0.5 * h) {
        double k1 = f(psi);
        double k2 = f(psi + 0.5 * h * k1);
        double k3 = f(psi + 0.5 * h * k2);
        double k4 = f(psi + h * k3);
        psi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
    }
    CHECK(riccati_lower_envelope(psi0, k, gamma, 0.3) == doctest::Approx(psi).epsilon(1e-8));
    CHECK(riccati_lower_envelope(psi0, k, gamma, 0.0) == doctest::Approx(psi0));

    // K = 0 closed form
    CHECK(riccati_lower_envelope(2.0, 0.0, 1.0, 0.25) == doctest::Approx(4.0).epsilon(1e-12));
    // at and past t_star the envelope is infinite
    double ts = *t_star_bound(-2.0, 1.0, 1.0).t_star;
    CHECK(std::isinf(riccati_lower_envelope(2.0, 1.0, 1.0, ts + 0.01)));
    CHECK_THROWS(riccati_lower_envelope(0.5, 1.0, 1.0, 0.1));
}

TEST_CASE("gaussian weight on the transverse grid") {
    Grid g(8, 64, 2 * pi, 2 * pi);
    WeightSpec w = make_gaussian_weight(g, 0.5, pi);
    double integral = 0.0;
    for (double v : w.phi) integral += v;
    CHECK(integral * g.dy() == doctest::Approx(1.0).epsilon(1e-14));
    // symmetric about y0 = pi (a grid point)
    int j0 = 32;
    for (int d = 1; d < 16; ++d)
        CHECK(w.phi[j0 + d] == doctest::Approx(w.phi[j0 - d]).epsilon(1e-12));
    CHECK(w.norm_inf == doctest::Approx(w.phi[j0]));
    CHECK(w.norm_inf == doctest::Approx(1.0 / (0.5 * std::sqrt(2 * pi))).epsilon(1e-3));

    // phi_pp consistent with a second difference of phi
    double worst = 0.0;
    for (int j = 1; j < 63; ++j) {
        double fd = (w.phi[j + 1] - 2 * w.phi[j] + w.phi[j - 1]) / (g.dy() * g.dy());
        worst = std::max(worst, std::abs(fd - w.phi_pp[j]));
    }
    CHECK(worst < 2e-2 * w.norm_inf / (0.5 * 0.5));

    // wide weight: periodization still integrates to 1
    WeightSpec wide = make_gaussian_weight(g, 5.0, 0.0);
    double wi = 0.0;
    for (double v : wide.phi) wi += v;
    CHECK(wi * g.dy() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS(make_gaussian_weight(g, 0.0, 0.0));
}

TEST_CASE("weighted slope series on a frozen field") {
    auto g = square_grid(64, 2 * pi);
    ModelParams p{1.0, make_quadratic_pure()};
    Trajectory tr = frozen(g, [](double x, double) { return std::sin(x); }, 1.0, 50);
    WeightSpec w = make_gaussian_weight(*g, 0.5, pi);

    // y-independent field: every row follows the same characteristic, so
    // M1(t) = cos(q(t)) with dq/dt = sin q
    M1Series s = weighted_M1(tr, p, pi / 2, w);
    REQUIRE(s.t.size() == 51);
    CHECK(s.m1.front() == doctest::Approx(0.0).epsilon(1e-10));
    for (std::size_t i : {25u, 50u}) {
        double q = 2.0 * std::atan(std::exp(s.t[i]));
        CHECK(s.m1[i] == doctest::Approx(std::cos(q)).epsilon(1e-6));
    }

    // seeded at the stationary point the slope stays at its minimum
    M1Series fixed = weighted_M1(tr, p, pi, w);
    CHECK(fixed.m1.front() == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(fixed.m1.back() == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("transverse bound constant and premise") {
    auto g = square_grid(64, 2 * pi);
    WeightSpec w = make_gaussian_weight(*g, 0.5, pi);
    SpectralField u0 = SpectralField::from_function(
        g, [](double x, double) { return -0.4 * std::sin(x); });

    C3Result c = c3_and_t0(u0, w, 1.0, 0.3, 2.0, 0.0);
    // reassemble the constant from its pieces
    double l2 = norm_hs(u0, 0.0), l2x = norm_hs(ddx(u0), 0.0);
    double energy = 0.5 * (l2 * l2 + l2x * l2x);
    double want = 0.3 * norm_xs(u0, 2.0) + 1.5 * energy * w.norm_inf
                + std::sqrt(energy) * w.norm_pp_l2;
    CHECK(c.c3 * c.c3 == doctest::Approx(want).epsilon(1e-12));
    // u_x(0) = -0.4 on every row, weight integrates to 1
    CHECK(c.m1_0 == doctest::Approx(-0.4).epsilon(1e-10));
    // premise m1_0 < -sqrt(2/gamma) c3 fails here, so no t0
    CHECK_FALSE(c.t0.has_value());

    // degenerate weightless case: c3 = 0 reduces to the K = 0 bound
    WeightSpec flat = w;
    for (auto& v : flat.phi_pp) v = 0.0;
    flat.norm_pp_l2 = 0.0;
    flat.norm_inf = 0.0;
    C3Result k0 = c3_and_t0(u0, flat, 1.0, 0.0, 2.0, 0.0);
    CHECK(k0.c3 == doctest::Approx(0.0));
    REQUIRE(k0.t0.has_value());
    CHECK(*k0.t0 == doctest::Approx(1.0 / (0.5 * 1.0 * 0.4)).epsilon(1e-12));

    CHECK_THROWS(c3_and_t0(u0, w, 1.0, -1.0, 2.0, 0.0));
}

TEST_CASE("empirical defect of the averaged slope") {
    // synthetic series solving dM1/dt = -(gamma/2) M1^2 + C exactly at C = 0.25
    const double gamma = 2.0, c = 0.25;
    // integrate dy/dt = -(gamma/2) y^2 + c with small RK4 steps, sample coarsely
    M1Series s;
    double y = -1.0, t = 0.0;
    const double h = 1e-4;
    auto f = [&](double v) { return -(0.5 * gamma) * v * v + c; };
    for (int i = 0; i <= 5000; ++i) {
        if (i % 100 == 0) {
            s.t.push_back(t);
            s.m1.push_back(y);
        }
        double k1 = f(y);
        double k2 = f(y + 0.5 * h * k1);
        double k3 = f(y + 0.5 * h * k2);
        double k4 = f(y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
    }
    double d = empirical_D(s, gamma);
    CHECK(d == doctest::Approx(c).epsilon(1e-2));

    // floor cuts off the tail
    M1Series tail;
    tail.t = {0.0, 1.0, 2.0, 3.0};
    tail.m1 = {-1.0, -2.0, -50.0, -900.0};
    double full = empirical_D(tail, 1.0);
    double cut = empirical_D(tail, 1.0, -10.0);
    CHECK(full > cut);
    CHECK_THROWS(empirical_D(M1Series{{0.0, 1.0}, {0.0, 0.0}}, 1.0));
}
