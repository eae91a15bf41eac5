// Quadrature, spline, ODE stepper and complex-Gamma checks against
// closed forms and brute-force references.

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qdnls/cgamma.hpp"
#include "qdnls/errors.hpp"
#include "qdnls/ode.hpp"
#include "qdnls/quad.hpp"

using namespace qdnls;

TEST_CASE("gauss panels hit polynomials and oscillations") {
    auto f = [](double x) { return x * x * x - 2.0 * x + 1.0; };
    const double exact = 0.25 * (16.0 - 0.0) - (4.0 - 0.0) + 2.0; // int_0^2
    CHECK(quad::integrate_gl(f, 0.0, 2.0, 1, 8) == doctest::Approx(exact).epsilon(1e-14));

    auto g = [](double x) { return std::sin(13.0 * x); };
    const double eg = (1.0 - std::cos(13.0 * 3.0)) / 13.0;
    CHECK(std::abs(quad::integrate_gl(g, 0.0, 3.0, 24, 12) - eg) < 1e-13);
}

TEST_CASE("log-singular quadrature") {
    // int_0^1 ln(x) dx = -1
    auto f = [](double x) { return std::log(x); };
    CHECK(std::abs(quad::integrate_log_left(f, 0.0, 1.0) + 1.0) < 1e-12);
    // int_0^1 ln|1-x| dx = -1 via the right-singular rule
    auto g = [](double x) { return std::log(std::abs(1.0 - x)); };
    CHECK(std::abs(quad::integrate_log_right(g, 0.0, 1.0) + 1.0) < 1e-12);
    // smooth weight times log: int_0^2 ln(x) cos(x) dx
    auto h = [](double x) { return std::log(x) * std::cos(x); };
    const double ref = oracle::trapezoid(
        [](double u) { return 2.0 * u * std::log(u * u) * std::cos(u * u); }, 1e-9,
        std::sqrt(2.0), 2'000'001);
    CHECK(std::abs(quad::integrate_log_left(h, 0.0, 2.0) - ref) < 1e-7);
}

TEST_CASE("cubic spline reproduces smooth functions") {
    std::vector<double> xs, ys;
    for (int i = 0; i <= 400; ++i) {
        const double x = -3.0 + 6.0 * i / 400.0;
        xs.push_back(x);
        ys.push_back(std::exp(-x * x));
    }
    quad::CubicSpline s(xs, ys);
    oracle::Rng rng(21);
    for (int rep = 0; rep < 50; ++rep) {
        const double x = rng.uniform(-2.9, 2.9);
        CHECK(std::abs(s(x) - std::exp(-x * x)) < 1e-7);
        CHECK(std::abs(s.deriv(x) + 2.0 * x * std::exp(-x * x)) < 1e-5);
    }
}

TEST_CASE("dopri5 integrates a stiff-ish oscillator to tolerance") {
    // y' = i w y, closed form e^{i w x}
    const double w = 40.0;
    auto rhs = [w](double, const std::array<cd, 1>& y, std::array<cd, 1>& dy) {
        dy[0] = cd(0.0, w) * y[0];
    };
    std::array<cd, 1> y{1.0};
    ode::Options opt;
    opt.rtol = 1e-11;
    ode::integrate<1>(rhs, 0.0, 5.0, y, opt);
    CHECK(std::abs(y[0] - std::exp(cd(0.0, w * 5.0))) < 1e-7);

    // backward direction
    ode::integrate<1>(rhs, 5.0, 0.0, y, opt);
    CHECK(std::abs(y[0] - 1.0) < 2e-7);
}

TEST_CASE("dopri5 path visits nodes exactly") {
    auto rhs = [](double x, const std::array<cd, 1>& y, std::array<cd, 1>& dy) {
        dy[0] = x * y[0];
    };
    std::vector<double> nodes;
    for (int i = 0; i <= 64; ++i) nodes.push_back(2.0 - i * (4.0 / 64.0)); // descending
    std::array<cd, 1> y{1.0};
    std::size_t count = 0;
    ode::integrate_path<1>(
        rhs, nodes, y,
        [&](std::size_t m, double x, const std::array<cd, 1>& yv) {
            ++count;
            // closed form exp((x^2 - 4)/2)
            CHECK(std::abs(yv[0] - std::exp((x * x - 4.0) / 2.0)) < 1e-9);
            (void)m;
        });
    CHECK(count == nodes.size());
}

TEST_CASE("complex gamma on the imaginary axis") {
    // |Gamma(i nu)|^2 = pi / (nu sinh(pi nu))
    for (double nu : {0.1, 0.5, 1.0, 3.0, 10.0}) {
        const cd g = gamma_imag_axis(nu);
        const double expect = M_PI / (nu * std::sinh(M_PI * nu));
        CHECK(std::norm(g) == doctest::Approx(expect).epsilon(1e-10));
    }
    CHECK(std::norm(gamma_imag_axis(1.0)) ==
          doctest::Approx(M_PI / std::sinh(M_PI)).epsilon(1e-10));
    CHECK(std::norm(gamma_imag_axis(0.5)) * 0.5 * std::sinh(0.5 * M_PI) / M_PI ==
          doctest::Approx(1.0).epsilon(1e-10));

    // arg Gamma(i nu) -> -pi/2 from Gamma(i nu) ~ 1/(i nu)
    double prev_gap = 1e9;
    for (double nu : {1e-2, 1e-3, 1e-4, 1e-5}) {
        const double a = std::arg(gamma_imag_axis(nu));
        const double gap = std::abs(a + M_PI / 2.0);
        CHECK(gap < prev_gap + 1e-12);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-4);

    CHECK_THROWS_AS(gamma_imag_axis(0.0), DomainError);
    CHECK_THROWS_AS(gamma_imag_axis(-1.0), DomainError);

    // sanity on the real axis: Gamma(5) = 24
    CHECK(std::abs(complex_gamma(cd(5.0, 0.0)) - cd(24.0, 0.0)) < 1e-10);
}
