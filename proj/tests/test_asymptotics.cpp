#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qdnls/asymptotics.hpp"
#include "qdnls/errors.hpp"
#include "qdnls/grid.hpp"
#include "qdnls/lax.hpp"

using namespace qdnls;
using asym::Branch;

namespace {

// Shared tables are expensive to build; compute once.
const scatter::ScatteringTable& gaussian_table() {
    static scatter::ScatteringTable tab = scatter::reflection_coefficients(
        make_gaussian(0.3), scatter::make_spectral_grid(1e-3, 12.0, 160));
    return tab;
}

scatter::ScatteringTable zero_table() {
    scatter::ScatteringTable t;
    for (double k : scatter::make_spectral_grid(1e-3, 12.0, 32)) {
        scatter::PosRow p{};
        p.k = k;
        p.s11 = p.s22 = p.sA33 = 1.0;
        t.pos.push_back(p);
        scatter::NegRow n{};
        n.k = -k;
        n.sA11 = n.sA22 = n.s33 = 1.0;
        t.neg.push_back(n);
    }
    std::reverse(t.neg.begin(), t.neg.end());
    return t;
}

// Synthetic table with prescribed |r1|^2 profile (phase irrelevant for the
// phase integral machinery).
scatter::ScatteringTable synthetic_table(const std::function<double(double)>& mod2) {
    scatter::ScatteringTable t;
    std::vector<double> ks;
    for (int i = 0; i <= 800; ++i) ks.push_back(1e-3 + (12.0 - 1e-3) * i / 800.0);
    for (double k : ks) {
        scatter::PosRow p{};
        p.k = k;
        p.r1 = std::sqrt(std::max(0.0, mod2(k)));
        p.s11 = 1.0;
        t.pos.push_back(p);
        scatter::NegRow n{};
        n.k = -k;
        n.r2 = p.r1;
        n.r2t = p.r1;
        n.sA11 = 1.0;
        t.neg.push_back(n);
    }
    std::reverse(t.neg.begin(), t.neg.end());
    return t;
}

} // namespace

TEST_CASE("phase integral vanishes for zero reflection") {
    asym::ReflectionData refl(zero_table());
    CHECK(asym::phase_integral(refl, 0.5, Branch::positive) == 0.0);
    const auto st = asym::leading_term(refl, 1.0, 50.0);
    CHECK(st.leading == cd(0.0, 0.0));
    CHECK(st.nu == 0.0);
}

TEST_CASE("phase integral against a brute-force quadrature") {
    asym::ReflectionData refl(gaussian_table());
    const double k0 = 0.5;
    const double graded = asym::phase_integral(refl, k0, Branch::positive);

    // midpoint rule over [k0, k0+1] handles the integrable log endpoint, plus
    // trapezoid on the smooth remainder
    const cd wk0 = lax::omega * k0;
    auto f = [&](double s) {
        const double w = std::log(std::abs(s - k0)) - std::log(std::abs(cd(s, 0.0) - wk0));
        return w * refl.rho1_deriv(s);
    };
    const long nmid = 2'000'000;
    double brute = 0.0;
    {
        const double h = 1.0 / double(nmid);
        for (long i = 0; i < nmid; ++i) brute += f(k0 + (i + 0.5) * h) * h;
    }
    brute += oracle::trapezoid(f, k0 + 1.0, refl.k_abs_max(), 1'000'001);
    brute /= M_PI;

    CHECK(std::abs(graded - brute) < 1e-6);
}

TEST_CASE("phase integral against integration by parts") {
    // int w drho = w(K) (rho(K)-rho(k0)) - int w'(s) (rho(s)-rho(k0)) ds
    asym::ReflectionData refl(gaussian_table());
    const double k0 = 0.8, K = refl.k_abs_max();
    const double direct = asym::phase_integral(refl, k0, Branch::positive) * M_PI;

    const cd wk0 = lax::omega * k0;
    auto w = [&](double s) {
        return std::log(std::abs(s - k0)) - std::log(std::abs(cd(s, 0.0) - wk0));
    };
    auto wp = [&](double s) {
        const double d2 = std::norm(cd(s, 0.0) - wk0);
        return 1.0 / (s - k0) - (s - std::real(wk0)) / d2;
    };
    const double rho_k0 = refl.rho1(k0);
    auto g = [&](double s) { return wp(s) * (refl.rho1(s) - rho_k0); };
    // (rho - rho(k0))/(s-k0) is bounded; fine for a graded rule
    const double ibp = w(K) * (refl.rho1(K) - rho_k0) - quad::integrate_log_left(g, k0, K, 16, 52);
    CHECK(std::abs(direct - ibp) < 1e-7);
}

TEST_CASE("plateau-modulus reflection localizes the density at the ramps") {
    // |r|^2 has a flat plateau: d rho = 0 there, so both assembly routes must
    // agree and the value only feels the ramps.
    auto mod2 = [](double k) {
        if (k < 1.0 || k > 3.0) return 0.0;
        if (k < 1.5) {
            const double u = (k - 1.0) / 0.5;
            return 0.09 * u * u * (3 - 2 * u);
        }
        if (k > 2.5) {
            const double u = (3.0 - k) / 0.5;
            return 0.09 * u * u * (3 - 2 * u);
        }
        return 0.09;
    };
    asym::ReflectionData refl(synthetic_table(mod2));
    const double k0 = 0.5;
    const double direct = asym::phase_integral(refl, k0, Branch::positive) * M_PI;

    const cd wk0 = lax::omega * k0;
    auto w = [&](double s) {
        return std::log(std::abs(s - k0)) - std::log(std::abs(cd(s, 0.0) - wk0));
    };
    auto f = [&](double s) { return w(s) * refl.rho1_deriv(s); };
    // integrand supported on the ramps only
    const double ramps = quad::integrate_gl(f, 1.0 - 0.05, 1.5 + 0.05, 600, 12) +
                         quad::integrate_gl(f, 2.5 - 0.05, 3.0 + 0.05, 600, 12);
    CHECK(std::abs(direct - ramps) < 2e-6);
}

TEST_CASE("amplitude identity |leading| = sqrt(nu/2t) 3^{-1/4}") {
    asym::ReflectionData refl(gaussian_table());
    oracle::Rng rng(77);
    for (int rep = 0; rep < 20; ++rep) {
        const double zeta = rng.uniform(0.3, 3.5);
        const double t = rng.uniform(20.0, 400.0);
        const auto st = asym::leading_term(refl, zeta, t);
        const double expect = std::sqrt(st.nu / (2.0 * t)) / std::pow(3.0, 0.25);
        CHECK(std::abs(st.leading) == doctest::Approx(expect).epsilon(1e-10));
        CHECK(std::isfinite(st.phi));
    }
}

TEST_CASE("leading term contract checks") {
    asym::ReflectionData refl(gaussian_table());
    CHECK_THROWS_AS(asym::leading_term(refl, 1.0, -2.0), DomainError);
    CHECK_THROWS_AS(asym::leading_term(refl, 0.0, 10.0), DomainError);
    CHECK_THROWS_AS(asym::leading_term(refl, 0.01, 10.0), DomainError); // below zeta_min
}

TEST_CASE("d0 modulus and the route equivalence") {
    asym::ReflectionData refl(gaussian_table());
    const auto d = asym::d0_crosscheck(refl, 1.0, 50.0);
    const auto st = asym::leading_term(refl, 1.0, 50.0);
    CHECK(std::abs(d.d0) == doctest::Approx(std::exp(2.0 * M_PI * st.nu)).epsilon(1e-8));
    CHECK(std::abs(d.leading - st.leading) < 1e-8 * std::abs(st.leading));

    for (double zeta : {0.7, 1.4}) {
        for (double t : {50.0, 200.0}) {
            const auto a = asym::leading_term(refl, zeta, t);
            const auto b = asym::d0_crosscheck(refl, zeta, t);
            CHECK(std::abs(a.leading - b.leading) < 1e-8 * std::abs(a.leading));
        }
    }

    // trivial data: d0 = 1
    asym::ReflectionData zrefl(zero_table());
    CHECK(std::abs(asym::d0_crosscheck(zrefl, 1.0, 50.0).d0 - 1.0) < 1e-14);
}

TEST_CASE("negative branch equals the reflection reduction") {
    // leading_iii(zeta; q0) = -leading_ii(-zeta; f0), f0(x) = -q0(-x)
    const GridFunction q = make_bump(0.3);
    const GridFunction f = reflect_negate(q);
    scatter::ReflectOptions ropt;
    ropt.solve.rtol = 1e-12;
    const auto kg = scatter::make_spectral_grid(1e-3, 12.0, 160);
    asym::ReflectionData rq(scatter::reflection_coefficients(q, kg, ropt));
    asym::ReflectionData rf(scatter::reflection_coefficients(f, kg, ropt));

    for (double zeta : {-0.8, -1.6}) {
        const double t = 60.0;
        const auto neg = asym::leading_term(rq, zeta, t);
        const auto pos = asym::leading_term(rf, -zeta, t);
        CHECK(std::abs(neg.leading + pos.leading) < 1e-8 * std::abs(pos.leading));
        CHECK(neg.nu == doctest::Approx(pos.nu).epsilon(1e-9));
    }
}

TEST_CASE("nu -> 0 removable limit stays finite and continuous") {
    // scale the gaussian table's reflection down so nu is tiny
    auto mod2 = [](double k) { return 1e-18 * std::exp(-k * k); };
    asym::ReflectionData refl(synthetic_table(mod2));
    const auto st = asym::leading_term(refl, 1.0, 100.0);
    CHECK(std::isfinite(std::abs(st.leading)));
    const double expect = std::sqrt(st.nu / 200.0) / std::pow(3.0, 0.25);
    CHECK(std::abs(st.leading) == doctest::Approx(expect).epsilon(1e-8));
}
