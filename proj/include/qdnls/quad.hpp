#pragma once

// Gauss-Legendre panel quadrature, a natural cubic spline, and the graded
// rules used for integrands with an integrable logarithmic singularity.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace qdnls::quad {

// Nodes/weights of the n-point Gauss-Legendre rule on [-1,1].
struct GaussRule {
    std::vector<double> x, w;
};

const GaussRule& gauss_rule(int n);

// Composite GL over [a,b] split into `panels` equal panels.
template <class F>
auto integrate_gl(F&& f, double a, double b, int panels, int order = 12)
    -> decltype(f(0.0)) {
    const GaussRule& g = gauss_rule(order);
    decltype(f(0.0)) acc{};
    const double hp = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * hp;
        const double c = 0.5 * (2.0 * lo + hp), r = 0.5 * hp;
        for (std::size_t i = 0; i < g.x.size(); ++i) acc += r * g.w[i] * f(c + r * g.x[i]);
    }
    return acc;
}

// Integral of f over [a,b] where f has an integrable log singularity at a.
// Substitutes s = a + u^2 and uses geometrically graded GL panels toward u=0.
// Grading stops just above the rounding floor of a + u^2 (below it the
// argument collapses onto the singular point); the truncated mass is
// O(eps |ln eps|) ~ 1e-13.
template <class F>
auto integrate_log_left(F&& f, double a, double b, int order = 12, int levels = 44)
    -> decltype(f(0.0)) {
    const double umax = std::sqrt(b - a);
    const double u_min =
        std::sqrt(64.0 * 2.220446049250313e-16 * std::max(1.0, std::abs(a) + std::abs(b)));
    decltype(f(0.0)) acc{};
    if (!(umax > u_min)) return acc;
    double hi = umax;
    for (int lev = 0; lev < levels; ++lev) {
        double lo = hi * 0.5;
        if (lo <= u_min || lev + 1 == levels) lo = u_min;
        const GaussRule& g = gauss_rule(order);
        const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            const double u = c + r * g.x[i];
            acc += r * g.w[i] * 2.0 * u * f(a + u * u);
        }
        hi = lo;
        if (hi <= u_min) break;
    }
    return acc;
}

// Mirror image: singularity at the right endpoint b.
template <class F>
auto integrate_log_right(F&& f, double a, double b, int order = 12, int levels = 44)
    -> decltype(f(0.0)) {
    return integrate_log_left([&](double u) { return f(a + b - u); }, a, b, order, levels);
}

// Natural cubic spline on strictly increasing abscissae.
class CubicSpline {
  public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double deriv(double x) const;
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

  private:
    std::size_t locate(double x) const;
    std::vector<double> x_, y_, m_; // m_ = second derivatives
};

// Complex-valued spline built from two real ones.
class ComplexSpline {
  public:
    ComplexSpline() = default;
    ComplexSpline(const std::vector<double>& x, const std::vector<std::complex<double>>& y);
    std::complex<double> operator()(double x) const { return {re_(x), im_(x)}; }
    std::complex<double> deriv(double x) const { return {re_.deriv(x), im_.deriv(x)}; }

  private:
    CubicSpline re_, im_;
};

// Cumulative integral of f from x0 to each node of `xs` (monotone nodes),
// one GL panel per cell.
std::vector<double> cumulative(const std::function<double(double)>& f, double x0,
                               const std::vector<double>& xs, int order = 8);

} // namespace qdnls::quad
