#pragma once

// Riemann-Hilbert data: the jump matrices v1..v6 on the contour rays, the
// sector-1 solution m1 assembled from eigenfunction entries, jump-condition
// verification on all six rays through the two symmetries, and reconstruction
// of the initial data from the large-k limit of m.

#include <functional>
#include <vector>

#include "qdnls/grid.hpp"
#include "qdnls/mat3.hpp"
#include "qdnls/scattering.hpp"

namespace qdnls::rh {

using Rfun = std::function<cd(double)>; // reflection coefficient on a half-line

// v_ray(x,t,k) for a point k on the given ray (1..6). r1 is consulted on
// (0,inf), r2 on (-inf,0), at the pulled-back arguments the formulas demand.
// Throws InvalidInputError if |r| >= 1 at a needed argument.
Mat3 jump_matrix(int ray, double x, double t, cd k, const Rfun& r1, const Rfun& r2);

// Spline-backed reflection functions from a scattering table.
struct TableReflection {
    explicit TableReflection(const scatter::ScatteringTable& t);
    cd r1(double k) const;
    cd r2(double k) const;
    double k_abs_min() const { return kmin_; }
    double k_abs_max() const { return kmax_; }

  private:
    quad::ComplexSpline r1_, r2_;
    double kmin_ = 0, kmax_ = 0;
};

Mat3 jump_matrix(const scatter::ScatteringTable& table, int ray, double x, double t,
                 double k_magnitude);

// m1(x,k) for k in closed D1, built columnwise from X, Y, X^A, Y^A and the
// denominators s11, s^A33. Throws SolitonAssumptionError on a vanishing
// denominator and DomainError for k outside closed D1.
Mat3 build_m1(const GridFunction& q, double x, cd k,
              const scatter::SolveOptions& opt = {});

// || m_-^{-1} m_+ - v_ray || at a point of magnitude k_magnitude on the ray,
// with m_+/m_- produced from m1 via the exact symmetries and v from freshly
// computed reflection coefficients. t = 0. Rays 2..6 exercise the symmetry
// extension; ray 1 is the primary jump check.
double verify_jump(const GridFunction& q, int ray, double x, double k_magnitude,
                   const scatter::SolveOptions& opt = {});

inline double verify_jump_ray1(const GridFunction& q, double x, double k,
                               const scatter::SolveOptions& opt = {}) {
    return verify_jump(q, 1, x, k, opt);
}

struct RecoverOptions {
    std::vector<double> k_ladder = {40.0, 80.0, 160.0, 320.0}; // |k|, ratio-2
    double ray_angle = M_PI / 6.0;  // mid-sector direction in D1
    scatter::SolveOptions solve;
    double divergence_guard = 1e-3;
};

// lim_{k->inf} (k m(x,0,k))_{13} by Richardson extrapolation along the ray;
// equals q0(x). Throws NumericalError if the extrapolation does not settle.
cd recover_q(const GridFunction& q, double x, const RecoverOptions& opt = {});

} // namespace qdnls::rh
