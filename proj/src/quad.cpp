#include "qdnls/quad.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace qdnls::quad {

namespace {

// Newton iteration on Legendre polynomials; standard construction.
GaussRule make_rule(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

} // namespace

const GaussRule& gauss_rule(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
    return it->second;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) throw std::invalid_argument("spline: need >= 3 nodes");
    m_.assign(n, 0.0);
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double sig = (x_[i] - x_[i - 1]) / (x_[i + 1] - x_[i - 1]);
        const double p = sig * m_[i - 1] + 2.0;
        m_[i] = (sig - 1.0) / p;
        u[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]) -
               (y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]);
        u[i] = (6.0 * u[i] / (x_[i + 1] - x_[i - 1]) - sig * u[i - 1]) / p;
    }
    for (std::size_t i = n - 1; i-- > 0;) m_[i] = m_[i] * m_[i + 1] + u[i];
}

std::size_t CubicSpline::locate(double x) const {
    std::size_t lo = 0, hi = x_.size() - 1;
    if (x <= x_.front()) return 0;
    if (x >= x_.back()) return x_.size() - 2;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (x_[mid] > x) hi = mid;
        else lo = mid;
    }
    return lo;
}

double CubicSpline::operator()(double x) const {
    const std::size_t i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::deriv(double x) const {
    const std::size_t i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
}

ComplexSpline::ComplexSpline(const std::vector<double>& x,
                             const std::vector<std::complex<double>>& y) {
    std::vector<double> re(y.size()), im(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        re[i] = y[i].real();
        im[i] = y[i].imag();
    }
    re_ = CubicSpline(x, re);
    im_ = CubicSpline(x, im);
}

std::vector<double> cumulative(const std::function<double(double)>& f, double x0,
                               const std::vector<double>& xs, int order) {
    const GaussRule& g = gauss_rule(order);
    std::vector<double> out(xs.size());
    double acc = 0.0, prev = x0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double c = 0.5 * (prev + xs[i]), r = 0.5 * (xs[i] - prev);
        double s = 0.0;
        for (std::size_t j = 0; j < g.x.size(); ++j) s += g.w[j] * f(c + r * g.x[j]);
        acc += r * s;
        out[i] = acc;
        prev = xs[i];
    }
    return out;
}

} // namespace qdnls::quad
