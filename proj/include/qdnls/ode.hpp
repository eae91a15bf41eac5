#pragma once

// Adaptive Dormand-Prince 5(4) integrator for small complex systems. The
// state is a fixed-size array of complex doubles; the right-hand side is any
// callable f(x, y, dy). Integration may run left or right; `integrate_path`
// lands exactly on a caller-supplied monotone node sequence (dense output for
// the quadrature layers) while keeping the adaptive step memory across nodes.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

#include "qdnls/errors.hpp"

namespace qdnls::ode {

using cd = std::complex<double>;

struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double hmax = 1e100;
    long max_steps = 50'000'000;
};

namespace detail {

// Dormand-Prince coefficients.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 4th-order embedded weights.
inline constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                        e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

} // namespace detail

template <std::size_t N, class F>
class Stepper {
  public:
    Stepper(F& f, double x0, const std::array<cd, N>& y0, const Options& opt)
        : f_(f), opt_(opt), x_(x0), y_(y0) {}

    const std::array<cd, N>& state() const { return y_; }
    double x() const { return x_; }

    // Advance exactly to x1 (either direction).
    void advance_to(double x1) {
        if (x1 == x_) return;
        const double dir = (x1 > x_) ? 1.0 : -1.0;
        if (h_ == 0.0 || dir * h_ < 0.0)
            h_ = dir * std::min({0.01 * std::abs(x1 - x_) + 1e-8, opt_.hmax, 0.1});

        while (dir * (x1 - x_) > 0.0) {
            if (++steps_ > opt_.max_steps) throw NumericalError("ode: step limit exceeded");
            double h = h_;
            bool clipped = false;
            if (dir * (x_ + h - x1) >= 0.0) {
                h = x1 - x_;
                clipped = true;
            }
            const double err = try_step(h);
            if (err <= 1.0) {
                x_ = clipped ? x1 : x_ + h;
                y_ = ynew_;
                k1_ = k7_; // FSAL
                have_k1_ = true;
            }
            const double fac =
                std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
            // A clipped accepted step keeps the remembered step size.
            if (err > 1.0 || !clipped) h_ = h * fac;
            if (std::abs(h_) > opt_.hmax) h_ = dir * opt_.hmax;
            if (std::abs(h_) < 1e-14 * std::max(1.0, std::abs(x_)))
                throw NumericalError("ode: step size underflow");
        }
    }

  private:
    // One trial step of size h from (x_, y_); fills ynew_, k7_; returns the
    // scaled error estimate.
    double try_step(double h) {
        using namespace detail;
        if (!have_k1_) {
            f_(x_, y_, k1_);
            have_k1_ = true;
        }
        for (std::size_t i = 0; i < N; ++i) yt_[i] = y_[i] + h * (a21 * k1_[i]);
        f_(x_ + c2 * h, yt_, k2_);
        for (std::size_t i = 0; i < N; ++i) yt_[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
        f_(x_ + c3 * h, yt_, k3_);
        for (std::size_t i = 0; i < N; ++i)
            yt_[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
        f_(x_ + c4 * h, yt_, k4_);
        for (std::size_t i = 0; i < N; ++i)
            yt_[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
        f_(x_ + c5 * h, yt_, k5_);
        for (std::size_t i = 0; i < N; ++i)
            yt_[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                                  a65 * k5_[i]);
        f_(x_ + h, yt_, k6_);
        for (std::size_t i = 0; i < N; ++i)
            ynew_[i] = y_[i] +
                       h * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] + b6 * k6_[i]);
        f_(x_ + h, ynew_, k7_);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const cd y4 = y_[i] + h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                                       e6 * k6_[i] + e7 * k7_[i]);
            const double sc = opt_.atol + opt_.rtol * std::max(std::abs(y_[i]), std::abs(ynew_[i]));
            err = std::max(err, std::abs(ynew_[i] - y4) / sc);
        }
        return err;
    }

    F& f_;
    Options opt_;
    double x_;
    std::array<cd, N> y_;
    double h_ = 0.0;
    bool have_k1_ = false;
    long steps_ = 0;
    std::array<cd, N> k1_, k2_, k3_, k4_, k5_, k6_, k7_, yt_, ynew_;
};

template <std::size_t N, class F>
void integrate(F&& f, double x0, double x1, std::array<cd, N>& y, const Options& opt = {}) {
    Stepper<N, F> st(f, x0, y, opt);
    st.advance_to(x1);
    y = st.state();
}

// Integrate across nodes[0] -> nodes.back(), invoking visit(idx, x, y) at
// every node (including the first). Nodes must be strictly monotone.
template <std::size_t N, class F, class V>
void integrate_path(F&& f, std::span<const double> nodes, std::array<cd, N>& y, V&& visit,
                    const Options& opt = {}) {
    if (nodes.empty()) return;
    visit(std::size_t{0}, nodes[0], y);
    Stepper<N, F> st(f, nodes[0], y, opt);
    for (std::size_t m = 1; m < nodes.size(); ++m) {
        st.advance_to(nodes[m]);
        visit(m, nodes[m], st.state());
    }
    y = st.state();
}

} // namespace qdnls::ode
