#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chkp/model.hpp"

#include <cmath>

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

TEST_CASE("nonlinearity presets") {
    Nonlinearity cl = make_classical(2.0);
    CHECK(cl.g(0.5) == doctest::Approx(2.0 * 2.0 * 0.5 + 0.75));
    CHECK(cl.g_prime(0.5) == doctest::Approx(4.0 + 3.0));
    CHECK(make_quadratic_pure().g(2.0) == doctest::Approx(12.0));
    CHECK(make_cubic().g(2.0) == doctest::Approx(8.0));
    CHECK(make_quartic().g_prime(2.0) == doctest::Approx(32.0));
    Nonlinearity poly = make_polynomial({1.0, 0.0, 2.0}); // u + 2u^3
    CHECK(poly.g(2.0) == doctest::Approx(18.0));
    CHECK(poly.g_prime(2.0) == doctest::Approx(25.0));
    CHECK(nonlinearity_by_name("quadratic_pure", 0.0).g(1.0) == doctest::Approx(3.0));
    CHECK_THROWS(nonlinearity_by_name("nope", 0.0));

    for (const auto& n : {make_classical(1.0), make_quadratic_pure(), make_cubic(),
                          make_quartic(), poly})
        CHECK_NOTHROW(validate_nonlinearity(n));

    Nonlinearity bad = make_quadratic_pure();
    bad.g_prime = [](double u) { return 5.0 * u; };
    CHECK_THROWS(validate_nonlinearity(bad));
    Nonlinearity offset = make_quadratic_pure();
    offset.g = [](double u) { return 3.0 * u * u + 1.0; };
    CHECK_THROWS(validate_nonlinearity(offset));
}

TEST_CASE("flux and residual on a single mode") {
    auto g = square_grid(64, 2 * pi);
    ModelParams p{1.0, make_polynomial({0.0, 1.0})}; // g(u) = u^2
    SpectralField u = SpectralField::from_function(g, [](double x, double) { return std::cos(x); });

    // F = u^2/2 + (u_x^2 - u^2)/2 = sin^2(x)/2
    SpectralField f_expect = SpectralField::from_function(
        g, [](double x, double) { return 0.5 * std::sin(x) * std::sin(x); });
    CHECK(max_diff(flux_F(u, p), f_expect) < 1e-12);

    // R = d/dx G_x F; multiplier -xi^2/(1+xi^2) on -cos(2x)/4 gives cos(2x)/5
    SpectralField r_expect = SpectralField::from_function(
        g, [](double x, double) { return std::cos(2 * x) / 5.0; });
    CHECK(max_diff(residual_R(u, p), r_expect) < 1e-12);
}

TEST_CASE("rhs structure") {
    auto g = square_grid(32, 2 * pi);
    ModelParams p{1.0, make_quadratic_pure()};
    SpectralField u = SpectralField::from_function(
        g, [](double x, double y) { return std::sin(x) * (1.0 + 0.3 * std::cos(y)); });

    SpectralField r = rhs(u, p);
    CHECK(r.x_mean_free());
    CHECK(r.finite());

    // explicit part + transverse linear term reassembles the full rhs
    SpectralField re = rhs_explicit(u, p);
    SpectralField kp = kp_nonlocal(u);
    double worst = 0.0;
    for (std::size_t i = 0; i < r.values().size(); ++i)
        worst = std::max(worst, std::abs(r.values()[i] - (re.values()[i] - kp.values()[i])));
    CHECK(worst < 1e-13);

    SpectralField biased = SpectralField::from_function(
        g, [](double, double y) { return 0.5 + 0.1 * std::cos(y); });
    CHECK_THROWS(rhs(biased, p));
    CHECK_THROWS(residual_R(biased, p));
}

TEST_CASE("rhs against a hand-assembled evaluation") {
    auto g = square_grid(32, 2 * pi);
    ModelParams p{0.7, make_classical(1.0)};
    SpectralField u = SpectralField::from_function(
        g, [](double x, double y) { return 0.2 * std::sin(x + y) + 0.1 * std::cos(2 * x); });
    SpectralField got = rhs(u, p);

    SpectralField ux = ddx(u);
    SpectralField adv(g);
    {
        auto& v = adv.values_mut();
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = u.values()[i] * ux.values()[i];
    }
    adv = dealias(adv);
    SpectralField gf = green_dx(flux_F(u, p));
    SpectralField kp = kp_nonlocal(u);
    SpectralField want(g);
    {
        auto& v = want.values_mut();
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = -p.gamma * adv.values()[i] - gf.values()[i] - kp.values()[i];
    }
    want = project_xmean(dealias(want));
    CHECK(max_diff(got, want) < 1e-13);
}

TEST_CASE("sign condition sampling") {
    ModelParams strict{1.0, make_quadratic_pure()};
    LiouvilleCheck c = check_liouville_condition(strict, -2.0, 2.0, 2001);
    CHECK(c.verdict == ConditionVerdict::holds_strict);
    CHECK(c.min_margin > 0.0);

    ModelParams weak{1.0, make_polynomial({0.0, 1.0})}; // g = u^2, margin identically 0
    CHECK(check_liouville_condition(weak, -2.0, 2.0, 2001).verdict ==
          ConditionVerdict::holds_weak);

    ModelParams fail{1.0, make_classical(1.0)}; // 2u + 2u^2 < 0 on (-1, 0)
    LiouvilleCheck f = check_liouville_condition(fail, -2.0, 2.0, 2001);
    CHECK(f.verdict == ConditionVerdict::fails);
    CHECK(f.fail_at > -1.0);
    CHECK(f.fail_at < 0.0);

    CHECK_THROWS(check_liouville_condition(strict, 0.5, 2.0, 100));
}

TEST_CASE("growth envelope sampling") {
    ModelParams cl{1.0, make_classical(1.0)};
    GrowthCheck g = check_growth(cl, -5.0, 5.0, 1001);
    CHECK(g.holds);
    CHECK(g.worst_ratio <= 1.0 + 1e-12);
    CHECK(g.worst_ratio > 0.5);

    ModelParams cb{1.0, make_cubic()};
    CHECK(check_growth(cb, -5.0, 5.0, 1001).holds);

    // deliberately understated envelope
    ModelParams lying{1.0, make_quadratic_pure()};
    lying.g.growth = GrowthSpec{1.0, 1.0, 0.0};
    CHECK_FALSE(check_growth(lying, -5.0, 5.0, 1001).holds);

    ModelParams none{1.0, make_quadratic_pure()};
    none.g.growth.reset();
    CHECK_THROWS(check_growth(none, -1.0, 1.0, 10));
}
