#pragma once

// Small dense 3x3 complex matrix / vector algebra. Everything is by value;
// these types are tiny and the compiler is good at this.

#include <array>
#include <cmath>
#include <complex>

namespace qdnls {

using cd = std::complex<double>;
using Vec3 = std::array<cd, 3>;

struct Mat3 {
    std::array<cd, 9> a{};

    cd& operator()(int i, int j) { return a[3 * i + j]; }
    const cd& operator()(int i, int j) const { return a[3 * i + j]; }

    static Mat3 zero() { return Mat3{}; }

    static Mat3 identity() {
        Mat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }

    static Mat3 diag(cd d0, cd d1, cd d2) {
        Mat3 m;
        m(0, 0) = d0;
        m(1, 1) = d1;
        m(2, 2) = d2;
        return m;
    }

    Vec3 col(int j) const { return {a[j], a[3 + j], a[6 + j]}; }
    Vec3 row(int i) const { return {a[3 * i], a[3 * i + 1], a[3 * i + 2]}; }

    void set_col(int j, const Vec3& v) {
        a[j] = v[0];
        a[3 + j] = v[1];
        a[6 + j] = v[2];
    }

    Mat3 transpose() const {
        Mat3 m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = (*this)(j, i);
        return m;
    }

    cd trace() const { return a[0] + a[4] + a[8]; }

    cd det() const {
        const Mat3& m = *this;
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
               m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    }

    // Adjugate / determinant.
    Mat3 inverse() const {
        const Mat3& m = *this;
        Mat3 adj;
        adj(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
        adj(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
        adj(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
        adj(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
        adj(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
        adj(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
        adj(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
        adj(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
        adj(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        cd d = det();
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.a[i] = adj.a[i] / d;
        return r;
    }

    double max_abs() const {
        double m = 0.0;
        for (const cd& v : a) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius() const {
        double s = 0.0;
        for (const cd& v : a) s += std::norm(v);
        return std::sqrt(s);
    }
};

inline Mat3 operator+(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}

inline Mat3 operator-(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}

inline Mat3 operator*(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            cd s = 0.0;
            for (int l = 0; l < 3; ++l) s += x(i, l) * y(l, j);
            r(i, j) = s;
        }
    return r;
}

inline Mat3 operator*(cd c, const Mat3& x) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[i] = c * x.a[i];
    return r;
}

inline Vec3 operator*(const Mat3& m, const Vec3& v) {
    Vec3 r;
    for (int i = 0; i < 3; ++i) r[i] = m(i, 0) * v[0] + m(i, 1) * v[1] + m(i, 2) * v[2];
    return r;
}

inline Mat3 conj(const Mat3& x) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[i] = std::conj(x.a[i]);
    return r;
}

// Cross product without conjugation; for unimodular M the columns of the
// inverse transpose are cross products of the columns of M.
inline Vec3 cross(const Vec3& u, const Vec3& v) {
    return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

inline double max_abs(const Vec3& v) {
    return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

} // namespace qdnls
