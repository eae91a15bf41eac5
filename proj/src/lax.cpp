#include "qdnls/lax.hpp"

#include <algorithm>
#include <cmath>

#include "qdnls/errors.hpp"

namespace qdnls::lax {

Mat3 conjugate_by_A(const Mat3& m) {
    // A e1=e2, e2=e3, e3=e1; (A M A^-1)(i,j) = M(sigma(i), sigma(j)) with
    // sigma = (1->3, 2->1, 3->2) in 0-based terms below.
    static const int s[3] = {2, 0, 1};
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = m(s[i], s[j]);
    return r;
}

Mat3 conjugate_by_B(const Mat3& m) {
    static const int s[3] = {1, 0, 2};
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = std::conj(m(s[i], s[j]));
    return r;
}

cd theta(int i, int j, double x, double t, cd k) {
    if (i < 1 || i > 3 || j < 1 || j > 3 || i == j)
        throw DomainError("theta: indices must be distinct and in {1,2,3}");
    return (l(i, k) - l(j, k)) * x + (z(i, k) - z(j, k)) * t;
}

Mat3 Umat(cd q, cd qbar) {
    const cd a = (1.0 - omega2) * qbar;
    const cd b = (1.0 - omega) * q;
    Mat3 u;
    u(0, 1) = a;
    u(0, 2) = b;
    u(1, 0) = b;
    u(1, 2) = a;
    u(2, 0) = a;
    u(2, 1) = b;
    return u;
}

Mat3 Vmat(cd q, cd qbar, cd qx, cd qbarx, cd k) {
    Mat3 v;
    v(0, 1) = k * (omega2 - 1.0) * qbar;
    v(0, 2) = k * (1.0 - omega2) * q;
    v(1, 0) = k * (omega - 1.0) * q;
    v(1, 2) = k * (1.0 - omega) * qbar;
    v(2, 0) = k * (omega - omega2) * qbar;
    v(2, 1) = k * (omega2 - omega) * q;

    const cd c1 = (qbarx - 3.0 * q * q) * omega;
    v(0, 1) += c1;
    v(1, 2) += c1;
    v(2, 0) += c1;

    const cd c2 = (qx - 3.0 * qbar * qbar) * omega2;
    v(0, 2) += c2;
    v(1, 0) += c2;
    v(2, 1) += c2;
    return v;
}

namespace {

// Relative tie tolerance for ray detection. Exact for the real axis (where
// Re l1 == Re l2 holds bitwise because omega2 = conj(omega)), a few ulps
// elsewhere.
constexpr double ray_tol = 1e-12;

} // namespace

SectorLoc classify_sector(cd k) {
    if (k == cd(0.0, 0.0)) throw DomainError("classify_sector: k = 0 is a singular point");
    const double re1 = std::real(l(1, k));
    const double re2 = std::real(l(2, k));
    const double re3 = std::real(l(3, k));
    const double scale = std::abs(k);

    const bool t12 = std::abs(re1 - re2) <= ray_tol * scale;
    const bool t13 = std::abs(re1 - re3) <= ray_tol * scale;
    const bool t23 = std::abs(re2 - re3) <= ray_tol * scale;

    if (t12 || t13 || t23) {
        // Snap to the nearest multiple of pi/3.
        double a = std::arg(k);
        if (a < 0) a += 2.0 * M_PI;
        int r = (int)std::lround(a / (M_PI / 3.0)) % 6;
        return {true, r + 1};
    }

    // Interior: identify the ordering of (Re l1, Re l2, Re l3).
    if (re1 < re2 && re2 < re3) return {false, 1};
    if (re1 < re3 && re3 < re2) return {false, 2};
    if (re3 < re1 && re1 < re2) return {false, 3};
    if (re3 < re2 && re2 < re1) return {false, 4};
    if (re2 < re3 && re3 < re1) return {false, 5};
    return {false, 6};
}

bool col_min_domain(int j, cd k) {
    const double rj = std::real(l(j, k));
    const double tol = ray_tol * std::abs(k) + 1e-300;
    for (int i = 1; i <= 3; ++i)
        if (std::real(l(i, k)) < rj - tol) return false;
    return true;
}

bool col_max_domain(int j, cd k) {
    const double rj = std::real(l(j, k));
    const double tol = ray_tol * std::abs(k) + 1e-300;
    for (int i = 1; i <= 3; ++i)
        if (std::real(l(i, k)) > rj + tol) return false;
    return true;
}

} // namespace qdnls::lax
