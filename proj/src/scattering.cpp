#include "qdnls/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "qdnls/errors.hpp"
#include "qdnls/ode.hpp"
#include "qdnls/par.hpp"

namespace qdnls::scatter {

using lax::l;

bool column_defined(EigKind kind, int j, cd k) {
    switch (kind) {
        case EigKind::X:
        case EigKind::YA: return lax::col_min_domain(j, k);
        case EigKind::Y:
        case EigKind::XA: return lax::col_max_domain(j, k);
    }
    return false;
}

namespace {

bool normalized_at_plus_inf(EigKind kind) {
    return kind == EigKind::X || kind == EigKind::XA;
}

bool adjoint_kind(EigKind kind) { return kind == EigKind::XA || kind == EigKind::YA; }

// Column ODE right-hand side: y' = +-(L - l_j) y +- U^(T) y.
struct ColumnRhs {
    const GridFunction& q;
    cd d1, d2, d3; // l_i - l_j, i = 1,2,3
    bool adjoint;

    ColumnRhs(const GridFunction& q_, cd k, int j, bool adj) : q(q_), adjoint(adj) {
        d1 = l(1, k) - l(j, k);
        d2 = l(2, k) - l(j, k);
        d3 = l(3, k) - l(j, k);
        if (adjoint) {
            d1 = -d1;
            d2 = -d2;
            d3 = -d3;
        }
    }

    void operator()(double x, const std::array<cd, 3>& y, std::array<cd, 3>& dy) const {
        const cd qv = q(x);
        const cd qb = std::conj(qv);
        const cd a = (1.0 - lax::omega2) * qb; // U pattern entries
        const cd b = (1.0 - lax::omega) * qv;
        cd u1, u2, u3;
        if (!adjoint) {
            u1 = a * y[1] + b * y[2];
            u2 = b * y[0] + a * y[2];
            u3 = a * y[0] + b * y[1];
        } else {
            // -(U^T y)
            u1 = -(b * y[1] + a * y[2]);
            u2 = -(a * y[0] + b * y[2]);
            u3 = -(b * y[0] + a * y[1]);
        }
        dy[0] = d1 * y[0] + u1;
        dy[1] = d2 * y[1] + u2;
        dy[2] = d3 * y[2] + u3;
    }
};

// Boole composite weight pattern; nodes must satisfy n % 4 == 1.
double boole_coeff(std::size_t i, std::size_t n) {
    if (i == 0 || i + 1 == n) return 7.0;
    switch (i % 4) {
        case 1:
        case 3: return 32.0;
        case 2: return 12.0;
        default: return 14.0;
    }
}

std::size_t quadrature_nodes(const GridFunction& q, cd k) {
    const double span = q.x_max() - q.x_min();
    const double rate = lax::sqrt3 * std::abs(k); // fastest oscillation of the integrand
    const double per_period = 80.0;
    std::size_t n = (std::size_t)std::ceil(std::max(4000.0, per_period * span * rate / (2.0 * M_PI)));
    n = ((n + 3) / 4) * 4 + 1;
    return n;
}

std::vector<double> path_nodes(const GridFunction& q, std::size_t n, bool from_right) {
    std::vector<double> xs(n);
    const double h = (q.x_max() - q.x_min()) / double(n - 1);
    for (std::size_t i = 0; i < n; ++i) xs[i] = q.x_min() + double(i) * h;
    if (from_right) std::reverse(xs.begin(), xs.end());
    return xs;
}

ode::Options to_ode(const SolveOptions& o) {
    ode::Options r;
    r.rtol = o.rtol;
    r.atol = o.atol;
    return r;
}

} // namespace

Vec3 Eigenfunction::column(std::size_t node, int j) const {
    if (j < 1 || j > 3) throw DomainError("eigenfunction column index out of range");
    if (!col_defined[j - 1])
        throw DomainError("eigenfunction column evaluated outside its sector");
    return samples[node].col(j - 1);
}

double Eigenfunction::det_defect(std::size_t node) const {
    return std::abs(samples[node].det() - cd(1.0, 0.0));
}

Eigenfunction solve_eigenfunction(const GridFunction& q, cd k, EigKind kind,
                                  const SolveOptions& opt) {
    if (!q.decay_flag())
        throw InvalidInputError("solve_eigenfunction: data does not decay below the tail "
                                "threshold at the window edges");
    Eigenfunction ef;
    ef.kind = kind;
    ef.k = k;
    const std::size_t n = q.size();
    ef.xs.resize(n);
    for (std::size_t i = 0; i < n; ++i) ef.xs[i] = q.x(i);
    const cd qnan(std::numeric_limits<double>::quiet_NaN(),
                  std::numeric_limits<double>::quiet_NaN());
    ef.samples.assign(n, Mat3{});
    for (Mat3& m : ef.samples)
        for (cd& v : m.a) v = qnan;

    const bool from_right = normalized_at_plus_inf(kind);
    std::vector<double> xs = ef.xs;
    if (from_right) std::reverse(xs.begin(), xs.end());

    for (int j = 1; j <= 3; ++j) {
        const bool ok = column_defined(kind, j, k);
        ef.col_defined[j - 1] = ok || opt.force_all_columns;
        if (!ef.col_defined[j - 1]) continue;
        ColumnRhs rhs(q, k, j, adjoint_kind(kind));
        std::array<cd, 3> y{0.0, 0.0, 0.0};
        y[j - 1] = 1.0;
        ode::integrate_path<3>(
            rhs, xs, y,
            [&](std::size_t m, double, const std::array<cd, 3>& yv) {
                const std::size_t node = from_right ? (n - 1 - m) : m;
                ef.samples[node].set_col(j - 1, {yv[0], yv[1], yv[2]});
            },
            to_ode(opt));
    }
    return ef;
}

Vec3 eig_column_value(const GridFunction& q, cd k, EigKind kind, int j, double x_eval,
                      const SolveOptions& opt) {
    if (!opt.force_all_columns && !column_defined(kind, j, k))
        throw DomainError("eigenfunction column evaluated outside its sector");
    const double x0 = normalized_at_plus_inf(kind) ? q.x_max() : q.x_min();
    ColumnRhs rhs(q, k, j, adjoint_kind(kind));
    std::array<cd, 3> y{0.0, 0.0, 0.0};
    y[j - 1] = 1.0;
    ode::integrate<3>(rhs, x0, x_eval, y, to_ode(opt));
    return {y[0], y[1], y[2]};
}

cd PartialMat3::value(int i, int j) const {
    const auto& v = (*this)(i, j);
    if (!v) throw DomainError("scattering entry requested outside its domain of definition");
    return *v;
}

Mat3 PartialMat3::dense_or_throw() const {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = value(i, j);
    return m;
}

namespace {

bool tie(cd k, int i, int j) {
    return std::abs(std::real(l(i, k) - l(j, k))) <= 1e-12 * std::abs(k);
}

// Shared implementation: defined entries of s or s^A by quadrature along the
// column solves.
PartialMat3 scattering_parts_impl(const GridFunction& q, cd k, bool adjoint,
                                  const SolveOptions& opt) {
    const EigKind kind = adjoint ? EigKind::XA : EigKind::X;
    PartialMat3 out;
    const std::size_t nq = quadrature_nodes(q, k);
    const std::vector<double> xs = path_nodes(q, nq, true);
    const double h = (q.x_max() - q.x_min()) / double(nq - 1);

    for (int j = 1; j <= 3; ++j) {
        if (!column_defined(kind, j, k)) continue;
        // Rows represented in this column: diagonal always, plus ray ties.
        std::array<bool, 3> want{};
        want[j - 1] = true;
        bool any = true;
        for (int i = 1; i <= 3; ++i)
            if (i != j && tie(k, i, j)) want[i - 1] = true;

        std::array<cd, 3> acc{0.0, 0.0, 0.0};
        ColumnRhs rhs(q, k, j, adjoint);
        std::array<cd, 3> y{0.0, 0.0, 0.0};
        y[j - 1] = 1.0;
        ode::integrate_path<3>(
            rhs, xs, y,
            [&](std::size_t m, double x, const std::array<cd, 3>& yv) {
                const cd qv = q(x);
                if (qv == cd(0.0, 0.0)) return;
                const cd qb = std::conj(qv);
                const cd a = (1.0 - lax::omega2) * qb;
                const cd b = (1.0 - lax::omega) * qv;
                cd f1, f2, f3; // (U X)_ij or (U^T X^A)_ij, i = 1..3
                if (!adjoint) {
                    f1 = a * yv[1] + b * yv[2];
                    f2 = b * yv[0] + a * yv[2];
                    f3 = a * yv[0] + b * yv[1];
                } else {
                    f1 = b * yv[1] + a * yv[2];
                    f2 = a * yv[0] + b * yv[2];
                    f3 = b * yv[0] + a * yv[1];
                }
                const cd fr[3] = {f1, f2, f3};
                const double w = boole_coeff(nq - 1 - m, nq); // m runs right-to-left
                for (int i = 1; i <= 3; ++i) {
                    if (!want[i - 1]) continue;
                    const cd expo = (adjoint ? 1.0 : -1.0) * x * (l(i, k) - l(j, k));
                    acc[i - 1] += w * std::exp(expo) * fr[i - 1];
                }
            },
            to_ode(opt));
        (void)any;

        const double scale = 2.0 * h / 45.0;
        for (int i = 1; i <= 3; ++i) {
            if (!want[i - 1]) continue;
            const cd integral = scale * acc[i - 1];
            const cd delta = (i == j) ? 1.0 : 0.0;
            out(i - 1, j - 1) = adjoint ? (delta + integral) : (delta - integral);
        }
    }
    return out;
}

} // namespace

PartialMat3 scattering_parts(const GridFunction& q, cd k, bool adjoint,
                             const SolveOptions& opt) {
    return scattering_parts_impl(q, k, adjoint, opt);
}

std::pair<PartialMat3, PartialMat3> scattering_matrix(const GridFunction& q, double k,
                                                      const SolveOptions& opt) {
    return {scattering_parts_impl(q, k, false, opt), scattering_parts_impl(q, k, true, opt)};
}

DiagEntryResult diag_entry_with_column(const GridFunction& q, cd k, bool adjoint, int j,
                                       double x_eval, const SolveOptions& opt) {
    const EigKind kind = adjoint ? EigKind::XA : EigKind::X;
    if (!column_defined(kind, j, k))
        throw DomainError("diag_entry_with_column: column outside its sector");

    const std::size_t nq = quadrature_nodes(q, k);
    const double h = (q.x_max() - q.x_min()) / double(nq - 1);

    // Uniform Boole nodes, right-to-left, with x_eval spliced in exactly.
    // quad_idx holds the uniform index for weight lookup, -1 for the splice.
    std::vector<double> xs;
    std::vector<long> quad_idx;
    xs.reserve(nq + 1);
    quad_idx.reserve(nq + 1);
    bool spliced = false;
    for (std::size_t i = 0; i < nq; ++i) {
        const double x = q.x_max() - double(i) * h;
        if (!spliced && x < x_eval - 1e-14) {
            xs.push_back(x_eval);
            quad_idx.push_back(-1);
            spliced = true;
        }
        if (std::abs(x - x_eval) <= 1e-14) spliced = true; // lands on a node
        xs.push_back(x);
        quad_idx.push_back((long)(nq - 1 - i));
    }
    if (!spliced) {
        xs.push_back(x_eval); // left of the window
        quad_idx.push_back(-1);
    }

    cd acc = 0.0;
    Vec3 col{cd(0, 0), cd(0, 0), cd(0, 0)};
    bool col_set = false;

    ColumnRhs rhs(q, k, j, adjoint);
    std::array<cd, 3> y{0.0, 0.0, 0.0};
    y[j - 1] = 1.0;
    ode::integrate_path<3>(
        rhs, xs, y,
        [&](std::size_t m, double x, const std::array<cd, 3>& yv) {
            if (!col_set && std::abs(x - x_eval) <= 1e-14) {
                col = {yv[0], yv[1], yv[2]};
                col_set = true;
            }
            const long qi = quad_idx[m];
            if (qi < 0) return;
            const cd qv = q(x);
            if (qv == cd(0.0, 0.0)) return;
            const cd qb = std::conj(qv);
            const cd a = (1.0 - lax::omega2) * qb;
            const cd b = (1.0 - lax::omega) * qv;
            cd f;
            if (!adjoint) {
                if (j == 1) f = a * yv[1] + b * yv[2];
                else if (j == 2) f = b * yv[0] + a * yv[2];
                else f = a * yv[0] + b * yv[1];
            } else {
                if (j == 1) f = b * yv[1] + a * yv[2];
                else if (j == 2) f = a * yv[0] + b * yv[2];
                else f = b * yv[0] + a * yv[1];
            }
            acc += boole_coeff((std::size_t)qi, nq) * f;
        },
        to_ode(opt));

    if (!col_set)
        throw DomainError("diag_entry_with_column: x_eval outside the data window");

    const cd integral = (2.0 * h / 45.0) * acc;
    DiagEntryResult out;
    out.diag = adjoint ? (cd(1.0) + integral) : (cd(1.0) - integral);
    out.column_at_x = col;
    return out;
}

Mat3 s_route_b(const GridFunction& q, cd k, const SolveOptions& opt) {
    SolveOptions o = opt;
    o.force_all_columns = true;
    const double xl = q.x_min();
    Mat3 X;
    for (int j = 1; j <= 3; ++j)
        X.set_col(j - 1, eig_column_value(q, k, EigKind::X, j, xl, o));
    Mat3 s;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            s(i, j) = std::exp(-xl * (l(i + 1, k) - l(j + 1, k))) * X(i, j);
    return s;
}

Mat3 sA_route_b(const GridFunction& q, cd k, const SolveOptions& opt) {
    SolveOptions o = opt;
    o.force_all_columns = true;
    const double xl = q.x_min();
    Mat3 XA;
    for (int j = 1; j <= 3; ++j)
        XA.set_col(j - 1, eig_column_value(q, k, EigKind::XA, j, xl, o));
    Mat3 s;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            s(i, j) = std::exp(xl * (l(i + 1, k) - l(j + 1, k))) * XA(i, j);
    return s;
}

std::vector<double> make_spectral_grid(double kmin, double kmax, std::size_t n) {
    if (!(kmin > 0.0) || !(kmax > kmin) || n < 2)
        throw InvalidInputError("make_spectral_grid: bad parameters");
    std::vector<double> ks(n);
    const double r = std::log(kmax / kmin) / double(n - 1);
    for (std::size_t i = 0; i < n; ++i) ks[i] = kmin * std::exp(r * double(i));
    ks.back() = kmax;
    return ks;
}

ScatteringTable reflection_coefficients(const GridFunction& q,
                                        const std::vector<double>& kg,
                                        const ReflectOptions& opt) {
    for (double k : kg)
        if (!(k > 0.0)) throw InvalidInputError("reflection grid must be positive");

    ScatteringTable tab;
    tab.zero_tolerance = opt.zero_tolerance;
    tab.pos.resize(kg.size());
    tab.neg.resize(kg.size());

    std::vector<std::string> failures(kg.size());
    par::for_each_index(kg.size(), [&](std::size_t idx) {
        try {
            const double k = kg[idx];
            {
                PartialMat3 s = scattering_parts_impl(q, k, false, opt.solve);
                PartialMat3 sa = scattering_parts_impl(q, k, true, opt.solve);
                PosRow row;
                row.k = k;
                row.s11 = s.value(0, 0);
                row.s12 = s.value(0, 1);
                row.s21 = s.value(1, 0);
                row.s22 = s.value(1, 1);
                row.sA33 = sa.value(2, 2);
                if (std::abs(row.s11) < opt.zero_tolerance)
                    throw SolitonAssumptionError("s11 vanishes near k = " + std::to_string(k));
                row.r1 = row.s12 / row.s11;
                tab.pos[idx] = row;
            }
            {
                const double km = -kg[idx];
                PartialMat3 sa = scattering_parts_impl(q, km, true, opt.solve);
                PartialMat3 s = scattering_parts_impl(q, km, false, opt.solve);
                NegRow row;
                row.k = km;
                row.sA11 = sa.value(0, 0);
                row.sA12 = sa.value(0, 1);
                row.sA21 = sa.value(1, 0);
                row.sA22 = sa.value(1, 1);
                row.s33 = s.value(2, 2);
                if (std::abs(row.sA11) < opt.zero_tolerance)
                    throw SolitonAssumptionError("sA11 vanishes near k = " + std::to_string(km));
                row.r2 = row.sA12 / row.sA11;
                row.r2t = row.sA21 / row.sA11;
                tab.neg[idx] = row;
            }
        } catch (const std::exception& e) {
            failures[idx] = e.what();
        }
    });

    for (const std::string& f : failures)
        if (!f.empty()) {
            if (f.find("vanishes") != std::string::npos) throw SolitonAssumptionError(f);
            throw NumericalError(f);
        }

    // negative rows ascending in k
    std::reverse(tab.neg.begin(), tab.neg.end());

    double margin = std::numeric_limits<double>::infinity();
    for (const auto& r : tab.pos) margin = std::min(margin, std::abs(r.s11));
    for (const auto& r : tab.neg) margin = std::min(margin, std::abs(r.sA11));
    tab.soliton_margin = margin;
    return tab;
}

namespace {

void write_csv_row(std::ofstream& out, std::initializer_list<double> vals) {
    char buf[64];
    bool first = true;
    for (double v : vals) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        if (!first) out << ',';
        out << buf;
        first = false;
    }
    out << '\n';
}

} // namespace

void save_table_csv(const ScatteringTable& t, const std::string& pos_path,
                    const std::string& neg_path, const std::string& header_comment) {
    {
        std::ofstream out(pos_path);
        if (!out) throw InvalidInputError("cannot write " + pos_path);
        if (!header_comment.empty()) out << "# " << header_comment << "\n";
        out << "k,re_r1,im_r1,abs_r1,re_s11,im_s11,re_s12,im_s12,re_s21,im_s21,re_s22,im_s22,"
               "re_sA33,im_sA33\n";
        for (const auto& r : t.pos)
            write_csv_row(out, {r.k, r.r1.real(), r.r1.imag(), std::abs(r.r1), r.s11.real(),
                                r.s11.imag(), r.s12.real(), r.s12.imag(), r.s21.real(),
                                r.s21.imag(), r.s22.real(), r.s22.imag(), r.sA33.real(),
                                r.sA33.imag()});
    }
    {
        std::ofstream out(neg_path);
        if (!out) throw InvalidInputError("cannot write " + neg_path);
        if (!header_comment.empty()) out << "# " << header_comment << "\n";
        out << "k,re_r2,im_r2,abs_r2,re_r2t,im_r2t,re_sA11,im_sA11,re_sA12,im_sA12,re_sA21,"
               "im_sA21,re_sA22,im_sA22,re_s33,im_s33\n";
        for (const auto& r : t.neg)
            write_csv_row(out, {r.k, r.r2.real(), r.r2.imag(), std::abs(r.r2), r.r2t.real(),
                                r.r2t.imag(), r.sA11.real(), r.sA11.imag(), r.sA12.real(),
                                r.sA12.imag(), r.sA21.real(), r.sA21.imag(), r.sA22.real(),
                                r.sA22.imag(), r.s33.real(), r.s33.imag()});
    }
}

namespace {

std::vector<std::vector<double>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || std::isalpha((unsigned char)line[0])) continue;
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream ss(line);
        std::vector<double> row;
        double v;
        while (ss >> v) row.push_back(v);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

ScatteringTable load_table_csv(const std::string& pos_path, const std::string& neg_path) {
    ScatteringTable t;
    for (const auto& r : read_csv(pos_path)) {
        if (r.size() < 14) throw InvalidInputError(pos_path + ": malformed row");
        PosRow p;
        p.k = r[0];
        p.r1 = {r[1], r[2]};
        p.s11 = {r[4], r[5]};
        p.s12 = {r[6], r[7]};
        p.s21 = {r[8], r[9]};
        p.s22 = {r[10], r[11]};
        p.sA33 = {r[12], r[13]};
        t.pos.push_back(p);
    }
    for (const auto& r : read_csv(neg_path)) {
        if (r.size() < 16) throw InvalidInputError(neg_path + ": malformed row");
        NegRow nr;
        nr.k = r[0];
        nr.r2 = {r[1], r[2]};
        nr.r2t = {r[4], r[5]};
        nr.sA11 = {r[6], r[7]};
        nr.sA12 = {r[8], r[9]};
        nr.sA21 = {r[10], r[11]};
        nr.sA22 = {r[12], r[13]};
        nr.s33 = {r[14], r[15]};
        t.neg.push_back(nr);
    }
    if (t.pos.empty() || t.neg.empty())
        throw InvalidInputError("reflection table is empty");
    return t;
}

LargeKCoefficient::LargeKCoefficient(const GridFunction& q) : q_(q) {
    // tail_mass(x) = int_x^{xmax} |q|^2 dx'
    const std::size_t n = q.size();
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = q.x(i);
    auto f = [&q](double x) { return std::norm(q(x)); };
    std::vector<double> cum = quad::cumulative(f, q.x_min(), xs, 8);
    total_mass_ = cum.back();
    std::vector<double> tail(n);
    for (std::size_t i = 0; i < n; ++i) tail[i] = total_mass_ - cum[i];
    tail_mass_ = quad::CubicSpline(xs, tail);
}

Mat3 LargeKCoefficient::X1_at(double x) const {
    const cd qv = q_(x);
    const cd qb = std::conj(qv);
    Mat3 m;
    m(0, 1) = lax::omega * qb;
    m(0, 2) = qv;
    m(1, 0) = lax::omega2 * qv;
    m(1, 2) = qb;
    m(2, 0) = lax::omega2 * qb;
    m(2, 1) = lax::omega * qv;
    // Diagonal from the recurrence d/dx X1^(d) = (U X1)^(d) normalized at
    // +inf: X1_ii = 3 w^{2i} int_{+inf}^x |q|^2 = -3 w^{2i} int_x^{+inf}.
    double tail = (x <= q_.x_min()) ? total_mass_ : (x >= q_.x_max()) ? 0.0 : tail_mass_(x);
    const cd c = -3.0 * tail;
    m(0, 0) = c * lax::omega2;
    m(1, 1) = c * lax::omega;
    m(2, 2) = c;
    return m;
}

Mat3 LargeKCoefficient::Y1_at(double x) const {
    Mat3 m = X1_at(x);
    // Same recurrence normalized at -inf: Y1_ii = 3 w^{2i} int_{-inf}^x |q|^2.
    double tail = (x <= q_.x_min()) ? total_mass_ : (x >= q_.x_max()) ? 0.0 : tail_mass_(x);
    const double head = total_mass_ - tail;
    const cd c = 3.0 * head;
    m(0, 0) = c * lax::omega2;
    m(1, 1) = c * lax::omega;
    m(2, 2) = c;
    return m;
}

} // namespace qdnls::scatter
