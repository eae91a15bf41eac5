#pragma once

// Constant matrices, spectral symbols, sector geometry and the two
// conjugation symmetries of the 3x3 Lax pair. Everything here is pure and
// immutable; safe to call from any thread.

#include "qdnls/mat3.hpp"

namespace qdnls::lax {

// omega = exp(2*pi*i/3) is stored once; all powers are derived from it so
// that every module sees bit-identical constants.
inline const cd omega = std::polar(1.0, 2.0 * M_PI / 3.0);
inline const cd omega2 = std::conj(omega); // omega^2 == conj(omega) on the unit circle

inline const double sqrt3 = std::sqrt(3.0);

// Default residual tolerances: exact algebraic identities vs quantities that
// pass through an integrator.
inline constexpr double tol_algebraic = 1e-12;
inline constexpr double tol_integrated = 1e-8;

inline cd omega_pow(int n) {
    n %= 3;
    if (n < 0) n += 3;
    switch (n) {
        case 1: return omega;
        case 2: return omega2;
        default: return 1.0;
    }
}

// l_j(k) = omega^j k, z_j(k) = omega^(2j) k^2, j = 1,2,3.
inline cd l(int j, cd k) { return omega_pow(j) * k; }
inline cd z(int j, cd k) { return omega_pow(2 * j) * k * k; }

inline Mat3 J() { return Mat3::diag(omega, omega2, 1.0); }
inline Mat3 Lmat(cd k) { return Mat3::diag(l(1, k), l(2, k), l(3, k)); }
inline Mat3 Zmat(cd k) { return Mat3::diag(z(1, k), z(2, k), z(3, k)); }

// Cyclic permutation A (e1->e2->e3->e1) and the transposition B (e1<->e2).
inline Mat3 matA() {
    Mat3 m;
    m(0, 2) = 1.0;
    m(1, 0) = 1.0;
    m(2, 1) = 1.0;
    return m;
}

inline Mat3 matB() {
    Mat3 m;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    m(2, 2) = 1.0;
    return m;
}

// A M A^-1 (A^-1 = A^T) and B conj(M) B.
Mat3 conjugate_by_A(const Mat3& m);
Mat3 conjugate_by_B(const Mat3& m);

// theta_ij(x,t,k) = (l_i - l_j) x + (z_i - z_j) t, i != j, i,j in {1,2,3}.
cd theta(int i, int j, double x, double t, cd k);

// Potential matrix U built from (q, conj q); zero diagonal.
Mat3 Umat(cd q, cd qbar);

// Time-part potential matrix V(q, qbar, q_x, qbar_x, k).
Mat3 Vmat(cd q, cd qbar, cd qx, cd qbarx, cd k);

// Sector classification of a nonzero spectral point. Interior points get a
// sector D1..D6; points where two Re l_j coincide get the ray 1..6 that
// carries the tie (rays are numbered counterclockwise from the positive real
// axis). Callers that need a sector must perturb k off the ray themselves.
struct SectorLoc {
    bool on_ray = false;
    int index = 0; // D-index or ray index, 1..6
};

SectorLoc classify_sector(cd k);

// Column domains of the four eigenfunction families: column j of X (and of
// Y^A) lives where Re l_j is minimal, column j of Y (and of X^A) where Re l_j
// is maximal. Closed sectors; ties allowed.
bool col_min_domain(int j, cd k);
bool col_max_domain(int j, cd k);

} // namespace qdnls::lax
