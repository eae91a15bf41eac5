#pragma once

// Complex-valued function sampled on a uniform real grid, with a declared
// truncation window. Built-in profiles carry an analytic evaluator so the ODE
// layers are not limited by interpolation error; file-loaded data falls back
// to a cubic spline of the samples.

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qdnls/mat3.hpp"
#include "qdnls/quad.hpp"

namespace qdnls {

class GridFunction {
  public:
    GridFunction() = default;
    GridFunction(double x_min, double x_max, std::size_t n, std::vector<cd> values,
                 std::function<cd(double)> analytic = {}, double tail_threshold = 1e-12,
                 std::function<cd(double)> analytic_deriv = {});

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    std::size_t size() const { return values_.size(); }
    double h() const { return (x_max_ - x_min_) / double(values_.size() - 1); }
    double x(std::size_t i) const { return x_min_ + double(i) * h(); }
    const std::vector<cd>& values() const { return values_; }
    bool decay_flag() const { return decay_flag_; }
    double tail_threshold() const { return tail_threshold_; }
    bool has_analytic() const { return bool(analytic_); }

    // Point evaluation: analytic profile if present, else spline through the
    // samples (zero outside the window).
    cd operator()(double x) const;

    // dq/dx: closed form for the built-in profiles, spline or finite
    // differences otherwise.
    cd deriv(double x) const;

    // Smallest window [lo,hi] outside of which |q| <= threshold on the grid.
    std::pair<double, double> support(double threshold = 1e-12) const;

    // Bound on the mass left outside the declared window.
    double truncation_error_bound() const;

    double max_abs() const;

  private:
    void ensure_spline() const;

    double x_min_ = -1.0, x_max_ = 1.0;
    std::vector<cd> values_;
    std::function<cd(double)> analytic_;
    std::function<cd(double)> analytic_deriv_;
    double tail_threshold_ = 1e-12;
    bool decay_flag_ = false;
    mutable std::shared_ptr<quad::ComplexSpline> spline_;
};

// q0(x) = amplitude * exp(-x^2), window chosen so the tails are below 1e-12.
GridFunction make_gaussian(double amplitude, std::size_t n = 2001);

// q0(x) = amplitude * exp(1 - 1/(1-x^2)) on |x|<1, zero outside.
GridFunction make_bump(double amplitude, std::size_t n = 2001, double window = 1.25);

GridFunction make_zero(double window = 6.0, std::size_t n = 801);

// f0(x) = -q0(-x); preserves the analytic evaluator.
GridFunction reflect_negate(const GridFunction& q);

// c * q0 (used for the omega-rotated appendix data).
GridFunction scale(const GridFunction& q, cd c);

// CSV with columns x, Re q, Im q. Throws InvalidInputError on NaN/Inf or a
// non-uniform grid.
GridFunction load_gridfunction_csv(const std::string& path);
void save_gridfunction_csv(const GridFunction& q, const std::string& path,
                           const std::string& header_comment = "");

} // namespace qdnls
