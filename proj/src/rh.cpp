#include "qdnls/rh.hpp"

#include <cmath>

#include "qdnls/errors.hpp"
#include "qdnls/lax.hpp"

namespace qdnls::rh {

using lax::conjugate_by_A;
using lax::conjugate_by_B;
using lax::theta;

namespace {

cd checked_r(const Rfun& r, double arg, const char* which) {
    const cd v = r(arg);
    if (std::abs(v) >= 1.0)
        throw InvalidInputError(std::string("jump_matrix: |") + which + "| >= 1 at k = " +
                                std::to_string(arg));
    return v;
}

} // namespace

Mat3 jump_matrix(int ray, double x, double t, cd k, const Rfun& r1, const Rfun& r2) {
    Mat3 v = Mat3::identity();
    switch (ray) {
        case 1: {
            const cd r = checked_r(r1, std::abs(k), "r1");
            const cd e = std::exp(-theta(2, 1, x, t, k));
            v(0, 1) = -r * e;
            v(1, 0) = std::conj(r) / e;
            v(1, 1) = 1.0 - std::norm(r);
            break;
        }
        case 2: {
            const cd r = checked_r(r2, -std::abs(k), "r2"); // omega k is negative real
            const cd e = std::exp(-theta(3, 2, x, t, k));
            v(1, 1) = 1.0 - std::norm(r);
            v(1, 2) = -std::conj(r) * e;
            v(2, 1) = r / e;
            break;
        }
        case 3: {
            const cd r = checked_r(r1, std::abs(k), "r1"); // omega^2 k is positive real
            const cd e = std::exp(-theta(3, 1, x, t, k));
            v(0, 0) = 1.0 - std::norm(r);
            v(0, 2) = std::conj(r) * e;
            v(2, 0) = -r / e;
            break;
        }
        case 4: {
            const cd r = checked_r(r2, -std::abs(k), "r2");
            const cd e = std::exp(-theta(2, 1, x, t, k));
            v(0, 0) = 1.0 - std::norm(r);
            v(0, 1) = -std::conj(r) * e;
            v(1, 0) = r / e;
            break;
        }
        case 5: {
            const cd r = checked_r(r1, std::abs(k), "r1"); // omega k is positive real
            const cd e = std::exp(-theta(3, 2, x, t, k));
            v(1, 2) = -r * e;
            v(2, 1) = std::conj(r) / e;
            v(2, 2) = 1.0 - std::norm(r);
            break;
        }
        case 6: {
            const cd r = checked_r(r2, -std::abs(k), "r2"); // omega^2 k is negative real
            const cd e = std::exp(-theta(3, 1, x, t, k));
            v(0, 2) = r * e;
            v(2, 0) = -std::conj(r) / e;
            v(2, 2) = 1.0 - std::norm(r);
            break;
        }
        default: throw DomainError("jump_matrix: ray index must be 1..6");
    }
    return v;
}

TableReflection::TableReflection(const scatter::ScatteringTable& t) {
    std::vector<double> kp, kn;
    std::vector<cd> r1v, r2v;
    for (const auto& row : t.pos) {
        kp.push_back(row.k);
        r1v.push_back(row.r1);
    }
    for (const auto& row : t.neg) {
        kn.push_back(row.k);
        r2v.push_back(row.r2);
    }
    r1_ = quad::ComplexSpline(kp, r1v);
    r2_ = quad::ComplexSpline(kn, r2v);
    kmin_ = kp.front();
    kmax_ = kp.back();
}

cd TableReflection::r1(double k) const {
    if (k <= 0.0) throw DomainError("r1 is defined on k > 0");
    if (k < kmin_ || k > kmax_) return 0.0; // rapid decay below/above the grid
    return r1_(k);
}

cd TableReflection::r2(double k) const {
    if (k >= 0.0) throw DomainError("r2 is defined on k < 0");
    if (-k < kmin_ || -k > kmax_) return 0.0;
    return r2_(k);
}

Mat3 jump_matrix(const scatter::ScatteringTable& table, int ray, double x, double t,
                 double k_magnitude) {
    TableReflection tr(table);
    const cd k = std::polar(k_magnitude, (ray - 1) * M_PI / 3.0);
    return jump_matrix(
        ray, x, t, k, [&](double kk) { return tr.r1(kk); },
        [&](double kk) { return tr.r2(kk); });
}

namespace {

bool in_closed_D1(cd k) {
    if (k == cd(0.0, 0.0)) return false;
    const auto loc = lax::classify_sector(k);
    return loc.on_ray ? (loc.index == 1 || loc.index == 2) : loc.index == 1;
}

} // namespace

Mat3 build_m1(const GridFunction& q, double x, cd k, const scatter::SolveOptions& opt) {
    if (!in_closed_D1(k)) throw DomainError("build_m1: k must lie in closed D1");

    const auto xs11 = scatter::diag_entry_with_column(q, k, false, 1, x, opt);
    const auto xa33 = scatter::diag_entry_with_column(q, k, true, 3, x, opt);
    if (std::abs(xs11.diag) < 1e-6)
        throw SolitonAssumptionError("build_m1: s11 vanishes at this k");
    if (std::abs(xa33.diag) < 1e-6)
        throw SolitonAssumptionError("build_m1: sA33 vanishes at this k");

    const Vec3 Ycol3 = scatter::eig_column_value(q, k, scatter::EigKind::Y, 3, x, opt);
    const Vec3 YAcol1 = scatter::eig_column_value(q, k, scatter::EigKind::YA, 1, x, opt);

    // Middle column: cross(X^A_{.3}, Y^A_{.1}) / s11.
    const Vec3 mid = cross(xa33.column_at_x, YAcol1);

    Mat3 m;
    for (int i = 0; i < 3; ++i) {
        m(i, 0) = xs11.column_at_x[i];
        m(i, 1) = mid[i] / xs11.diag;
        m(i, 2) = Ycol3[i] / xa33.diag;
    }
    return m;
}

double verify_jump(const GridFunction& q, int ray, double x, double k_magnitude,
                   const scatter::SolveOptions& opt) {
    if (ray < 1 || ray > 6) throw DomainError("verify_jump: ray must be 1..6");
    if (!(k_magnitude > 0.0)) throw DomainError("verify_jump: need |k| > 0");

    const bool odd = (ray % 2 == 1);
    // Pull-back point on the boundary of closed D1 where m1 is evaluated.
    const cd kp = odd ? cd(k_magnitude, 0.0) : std::polar(k_magnitude, M_PI / 3.0);
    const Mat3 M = build_m1(q, x, kp, opt);
    const Mat3 MA = conjugate_by_A(M);
    const Mat3 MA2 = conjugate_by_A(MA);

    Mat3 mp, mm;
    switch (ray) {
        case 1:
            mp = M;
            mm = conjugate_by_B(M);
            break;
        case 2:
            mm = M;
            mp = conjugate_by_B(MA);
            break;
        case 3:
            mp = MA2;
            mm = conjugate_by_B(MA);
            break;
        case 4:
            mm = MA2;
            mp = conjugate_by_B(MA2);
            break;
        case 5:
            mp = MA;
            mm = conjugate_by_B(MA2);
            break;
        case 6:
            mm = MA;
            mp = conjugate_by_B(M);
            break;
    }

    // Fresh reflection coefficients at the pulled-back real arguments.
    auto r1f = [&](double kk) -> cd {
        auto s = scatter::scattering_parts(q, kk, false, opt);
        const cd s11 = s.value(0, 0);
        if (std::abs(s11) < 1e-6) throw SolitonAssumptionError("verify_jump: s11 ~ 0");
        return s.value(0, 1) / s11;
    };
    auto r2f = [&](double kk) -> cd {
        auto sa = scatter::scattering_parts(q, kk, true, opt);
        const cd sA11 = sa.value(0, 0);
        if (std::abs(sA11) < 1e-6) throw SolitonAssumptionError("verify_jump: sA11 ~ 0");
        return sa.value(0, 1) / sA11;
    };

    const cd kray = std::polar(k_magnitude, (ray - 1) * M_PI / 3.0);
    const Mat3 v = jump_matrix(ray, x, 0.0, kray, r1f, r2f);
    const Mat3 resid = mm.inverse() * mp - v;
    return resid.max_abs();
}

cd recover_q(const GridFunction& q, double x, const RecoverOptions& opt) {
    const std::size_t n = opt.k_ladder.size();
    if (n < 2) throw InvalidInputError("recover_q: ladder needs >= 2 points");
    std::vector<cd> cur(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cd k = std::polar(opt.k_ladder[i], opt.ray_angle);
        const auto xa33 = scatter::diag_entry_with_column(q, k, true, 3, x, opt.solve);
        const Vec3 Ycol3 = scatter::eig_column_value(q, k, scatter::EigKind::Y, 3, x, opt.solve);
        if (std::abs(xa33.diag) < 1e-6)
            throw SolitonAssumptionError("recover_q: sA33 vanishes");
        cur[i] = k * (Ycol3[0] / xa33.diag); // (k m1)_{13}
    }

    // Neville table in the variable 1/|k| (ratio 2), in place. The settling
    // estimate compares the full extrapolation with the depth-(n-2) value
    // built from the finer samples.
    cd penultimate = cur[0];
    double pow2 = 1.0;
    for (std::size_t m = 1; m < n; ++m) {
        pow2 *= 2.0;
        if (m + 1 == n) penultimate = cur[1];
        for (std::size_t i = 0; i + m < n; ++i)
            cur[i] = (pow2 * cur[i + 1] - cur[i]) / (pow2 - 1.0);
    }
    const cd best = cur[0];
    const double settle = std::abs(best - penultimate);
    if (settle > opt.divergence_guard && settle > 0.5 * std::abs(best))
        throw NumericalError("recover_q: Richardson extrapolation did not settle");
    return best;
}

} // namespace qdnls::rh
