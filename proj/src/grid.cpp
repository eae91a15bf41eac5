#include "qdnls/grid.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qdnls/errors.hpp"

namespace qdnls {

GridFunction::GridFunction(double x_min, double x_max, std::size_t n, std::vector<cd> values,
                           std::function<cd(double)> analytic, double tail_threshold,
                           std::function<cd(double)> analytic_deriv)
    : x_min_(x_min), x_max_(x_max), values_(std::move(values)), analytic_(std::move(analytic)),
      analytic_deriv_(std::move(analytic_deriv)), tail_threshold_(tail_threshold) {
    if (values_.size() != n || n < 2) throw InvalidInputError("GridFunction: bad sample count");
    if (!(x_max_ > x_min_)) throw InvalidInputError("GridFunction: bad window");
    for (const cd& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw InvalidInputError("GridFunction: non-finite sample");
    decay_flag_ = std::abs(values_.front()) <= tail_threshold_ &&
                  std::abs(values_.back()) <= tail_threshold_;
}

void GridFunction::ensure_spline() const {
    if (!spline_) {
        std::vector<double> xs(values_.size());
        for (std::size_t i = 0; i < values_.size(); ++i) xs[i] = x(i);
        spline_ = std::make_shared<quad::ComplexSpline>(xs, values_);
    }
}

cd GridFunction::operator()(double xp) const {
    if (analytic_) return analytic_(xp);
    if (xp <= x_min_ || xp >= x_max_) return 0.0;
    ensure_spline();
    return (*spline_)(xp);
}

cd GridFunction::deriv(double x) const {
    if (analytic_deriv_) return analytic_deriv_(x);
    if (analytic_) {
        const double h = 1e-4;
        return (-analytic_(x + 2 * h) + 8.0 * analytic_(x + h) - 8.0 * analytic_(x - h) +
                analytic_(x - 2 * h)) /
               (12.0 * h);
    }
    if (x <= x_min_ || x >= x_max_) return 0.0;
    ensure_spline();
    return spline_->deriv(x);
}

std::pair<double, double> GridFunction::support(double threshold) const {
    std::size_t lo = 0, hi = values_.size() - 1;
    while (lo < hi && std::abs(values_[lo]) <= threshold) ++lo;
    while (hi > lo && std::abs(values_[hi]) <= threshold) --hi;
    if (lo >= hi) return {0.0, 0.0}; // identically small
    return {x(lo), x(hi)};
}

double GridFunction::truncation_error_bound() const {
    return tail_threshold_ * (x_max_ - x_min_);
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (const cd& v : values_) m = std::max(m, std::abs(v));
    return m;
}

namespace {

GridFunction sampled_profile(double x_min, double x_max, std::size_t n,
                             std::function<cd(double)> f,
                             std::function<cd(double)> df = {}) {
    std::vector<cd> vals(n);
    const double h = (x_max - x_min) / double(n - 1);
    for (std::size_t i = 0; i < n; ++i) vals[i] = f(x_min + double(i) * h);
    return GridFunction(x_min, x_max, n, std::move(vals), std::move(f), 1e-12, std::move(df));
}

} // namespace

GridFunction make_gaussian(double amplitude, std::size_t n) {
    if (!(amplitude > 0.0)) throw InvalidInputError("gaussian: amplitude must be > 0");
    // |A e^{-x^2}| < 1e-12 outside +-sqrt(ln(A/1e-12)); round up and pad.
    const double w = std::ceil(std::sqrt(std::log(amplitude / 1e-12))) + 1.0;
    const double a = amplitude;
    return sampled_profile(
        -w, w, n, [a](double x) { return cd(a * std::exp(-x * x), 0.0); },
        [a](double x) { return cd(-2.0 * x * a * std::exp(-x * x), 0.0); });
}

GridFunction make_bump(double amplitude, std::size_t n, double window) {
    if (!(amplitude > 0.0)) throw InvalidInputError("bump: amplitude must be > 0");
    const double a = amplitude;
    auto f = [a](double x) -> cd {
        if (std::abs(x) >= 1.0) return 0.0;
        return cd(a * std::exp(1.0 - 1.0 / (1.0 - x * x)), 0.0);
    };
    auto df = [a](double x) -> cd {
        if (std::abs(x) >= 1.0) return 0.0;
        const double s = 1.0 - x * x;
        return cd(a * std::exp(1.0 - 1.0 / s) * (-2.0 * x / (s * s)), 0.0);
    };
    return sampled_profile(-window, window, n, f, df);
}

GridFunction make_zero(double window, std::size_t n) {
    return sampled_profile(
        -window, window, n, [](double) { return cd(0.0, 0.0); },
        [](double) { return cd(0.0, 0.0); });
}

GridFunction reflect_negate(const GridFunction& q) {
    const std::size_t n = q.size();
    std::vector<cd> vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = -q.values()[n - 1 - i];
    std::function<cd(double)> f, df;
    if (q.has_analytic()) {
        f = [q](double x) { return -q(-x); };
        df = [q](double x) { return q.deriv(-x); };
    }
    return GridFunction(-q.x_max(), -q.x_min(), n, std::move(vals), std::move(f),
                        q.tail_threshold(), std::move(df));
}

GridFunction scale(const GridFunction& q, cd c) {
    std::vector<cd> vals(q.values());
    for (cd& v : vals) v *= c;
    std::function<cd(double)> f, df;
    if (q.has_analytic()) {
        f = [q, c](double x) { return c * q(x); };
        df = [q, c](double x) { return c * q.deriv(x); };
    }
    return GridFunction(q.x_min(), q.x_max(), q.size(), std::move(vals), std::move(f),
                        q.tail_threshold(), std::move(df));
}

GridFunction load_gridfunction_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open " + path);
    std::vector<double> xs;
    std::vector<cd> vals;
    std::string line;
    bool seen_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        for (char& ch : line)
            if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
        // strtod-based parsing: accepts nan/inf tokens (which the validator
        // then rejects) instead of silently dropping the row.
        std::vector<double> row;
        const char* p = line.c_str();
        char* end = nullptr;
        bool bad_token = false;
        while (*p) {
            while (*p == ' ') ++p;
            if (!*p) break;
            const double v = std::strtod(p, &end);
            if (end == p) {
                bad_token = true;
                break;
            }
            row.push_back(v);
            p = end;
        }
        if (bad_token) {
            if (!seen_header && xs.empty()) {
                seen_header = true; // a single leading column-name line is fine
                continue;
            }
            throw InvalidInputError(path + ": unparseable row: " + line);
        }
        if (row.size() < 2) throw InvalidInputError(path + ": row with fewer than 2 columns");
        xs.push_back(row[0]);
        vals.emplace_back(row[1], row.size() > 2 ? row[2] : 0.0);
    }
    if (xs.size() < 2) throw InvalidInputError(path + ": need at least 2 samples");
    const double h = xs[1] - xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (std::abs((xs[i] - xs[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw InvalidInputError(path + ": grid is not uniform");
    return GridFunction(xs.front(), xs.back(), xs.size(), std::move(vals));
}

void save_gridfunction_csv(const GridFunction& q, const std::string& path,
                           const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw InvalidInputError("cannot write " + path);
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    out << "x,re_q,im_q\n";
    char buf[96];
    for (std::size_t i = 0; i < q.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", q.x(i), q.values()[i].real(),
                      q.values()[i].imag());
        out << buf;
    }
}

} // namespace qdnls
