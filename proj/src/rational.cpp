#include "dpw/rational.hpp"

#include <Eigen/Dense>
#include <numbers>
#include <algorithm>

namespace dpw {

// ---------------------------------------------------------------------------
Moebius Moebius::normalized() const {
    double s = std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(c), std::abs(d)));
    if (s == 0.0) throw std::invalid_argument("Moebius: zero map");
    return {a / s, b / s, c / s, d / s};
}

bool Moebius::maps_infinity_to_infinity() const {
    double s = std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(c), std::abs(d)));
    return std::abs(c) <= 1e-13 * s;
}

// ---------------------------------------------------------------------------
void RationalForm::add_term(cplx p, int order, const Mat2& coef) {
    for (auto& t : poles) {
        if (std::abs(t.p - p) <= 1e-12 * (1.0 + std::abs(p))) {
            if (int(t.c.size()) < order) t.c.resize(size_t(order));
            t.c[size_t(order - 1)] = t.c[size_t(order - 1)] + coef;
            return;
        }
    }
    PoleTerm t;
    t.p = p;
    t.c.resize(size_t(order));
    t.c[size_t(order - 1)] = coef;
    poles.push_back(std::move(t));
}

void RationalForm::add_simple(cplx p, const Mat2& res) { add_term(p, 1, res); }
void RationalForm::add_double(cplx p, const Mat2& coef) { add_term(p, 2, coef); }

void RationalForm::add(const RationalForm& o) {
    for (const auto& t : o.poles)
        for (int k = 0; k < t.order(); ++k)
            if (t.c[size_t(k)].max_abs() > 0.0) add_term(t.p, k + 1, t.c[size_t(k)]);
    c0 = c0 + o.c0;
}

void RationalForm::scale(cplx s) {
    for (auto& t : poles)
        for (auto& m : t.c) m = m * s;
    c0 = c0 * s;
}

Mat2 RationalForm::eval(cplx z) const {
    Mat2 v = c0;
    for (const auto& t : poles) {
        cplx w = 1.0 / (z - t.p), wk = w;
        for (const auto& m : t.c) {
            v = v + m * wk;
            wk *= w;
        }
    }
    return v;
}

Mat2 RationalForm::residue(cplx p, double tol) const {
    Mat2 r;
    for (const auto& t : poles)
        if (std::abs(t.p - p) <= tol && t.order() >= 1) r = r + t.c[0];
    return r;
}

RationalForm::Laurent RationalForm::laurent(cplx p0, double tol) const {
    Laurent out;
    out.reg = c0;
    for (const auto& t : poles) {
        if (std::abs(t.p - p0) <= tol) {
            if (t.order() >= 1) out.res = out.res + t.c[0];
            // higher-order parts at p0 contribute nothing to res/reg
        } else {
            cplx w = 1.0 / (p0 - t.p), wk = w;
            for (const auto& m : t.c) {
                out.reg = out.reg + m * wk;
                wk *= w;
            }
        }
    }
    return out;
}

void RationalForm::compress(double pos_tol, double coef_tol) {
    std::vector<PoleTerm> merged;
    for (const auto& t : poles) {
        bool found = false;
        for (auto& u : merged) {
            if (std::abs(u.p - t.p) <= pos_tol * (1.0 + std::abs(t.p))) {
                if (u.c.size() < t.c.size()) u.c.resize(t.c.size());
                for (size_t k = 0; k < t.c.size(); ++k) u.c[k] = u.c[k] + t.c[k];
                found = true;
                break;
            }
        }
        if (!found) merged.push_back(t);
    }
    poles.clear();
    for (auto& t : merged) {
        while (!t.c.empty() && t.c.back().max_abs() <= coef_tol) t.c.pop_back();
        bool all_zero = true;
        for (const auto& m : t.c)
            if (m.max_abs() > coef_tol) all_zero = false;
        if (!t.c.empty() && !all_zero) poles.push_back(std::move(t));
    }
}

RationalForm RationalForm::pullback(const Moebius& phi0) const {
    Moebius phi = phi0.normalized();
    RationalForm out;
    const double eps = 1e-13;
    const bool c_zero = std::abs(phi.c) <= eps;
    const cplx det = phi.a * phi.d - phi.b * phi.c;
    const cplx Winf = c_zero ? cplx(0) : phi.preimage_of_infinity();

    // constant part: c0 * phi'(w) dw
    if (c0.max_abs() > 0.0) {
        if (c_zero) {
            out.c0 = out.c0 + c0 * (phi.a / phi.d);
        } else {
            out.add_double(Winf, c0 * (det / (phi.c * phi.c)));
        }
    }

    for (const auto& t : poles) {
        if (t.order() > 2)
            throw std::runtime_error("RationalForm::pullback: order > 2 unsupported");
        const cplx p = t.p;
        const bool p_at_image_of_inf = !c_zero && std::abs(phi.a - p * phi.c) <=
                                        1e-12 * (std::abs(phi.a) + std::abs(p * phi.c) + 1e-300);
        // simple part
        if (t.order() >= 1 && t.c[0].max_abs() > 0.0) {
            const Mat2& r = t.c[0];
            if (p_at_image_of_inf) {
                out.add_simple(Winf, -1.0 * r);  // pole at w=inf is implicit
            } else {
                cplx W = phi.apply_inv(p);
                out.add_simple(W, r);
                if (!c_zero) out.add_simple(Winf, -1.0 * r);
            }
        }
        // double part
        if (t.order() >= 2 && t.c[1].max_abs() > 0.0) {
            const Mat2& m = t.c[1];
            if (p_at_image_of_inf) {
                out.c0 = out.c0 + m * (phi.c * phi.c / det);
            } else {
                cplx W = phi.apply_inv(p);
                out.add_double(W, m * (1.0 / phi.deriv(W)));
            }
        }
    }
    out.compress();
    return out;
}

double RationalForm::max_coef() const {
    double v = c0.max_abs();
    for (const auto& t : poles)
        for (const auto& m : t.c) v = std::max(v, m.max_abs());
    return v;
}

RationalForm std_form_node(cplx q, cplx qb, const Mat2& coef) {
    RationalForm f;
    f.add_simple(q, coef);
    if (std::abs(qb) > 1e-14) f.add_simple(1.0 / qb, -1.0 * coef);
    return f;
}

RationalForm std_form_halfpair(cplx p, cplx q, cplx qb, const Mat2& coef) {
    RationalForm f;
    f.add_simple(p, coef);
    f.add_simple(q, -0.5 * coef);
    if (std::abs(qb) > 1e-14) f.add_simple(1.0 / qb, -0.5 * coef);
    return f;
}

Mat2 contour_integral(const RationalForm& f, cplx center, double r, int n) {
    Mat2 acc;
    for (int k = 0; k < n; ++k) {
        double th = 2.0 * std::numbers::pi * k / n;
        cplx e(std::cos(th), std::sin(th));
        cplx z = center + r * e;
        cplx dz = cplx(0.0, 1.0) * r * e * (2.0 * std::numbers::pi / n);
        acc = acc + f.eval(z) * dz;
    }
    return acc;
}

Mat2 segment_integral(const RationalForm& f, cplx z0, cplx z1, int n) {
    // composite Gauss-Legendre (4 point) on n subintervals
    static const double xg[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
    static const double wg[4] = {0.3478548451374538, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374538};
    Mat2 acc;
    cplx dz = (z1 - z0) / double(n);
    for (int i = 0; i < n; ++i) {
        cplx za = z0 + dz * double(i), mid = za + 0.5 * dz;
        for (int q = 0; q < 4; ++q) {
            cplx z = mid + 0.5 * dz * xg[q];
            acc = acc + f.eval(z) * (wg[q] * 0.5) * dz;
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------
cplx Poly::eval(cplx z) const {
    cplx v(0.0);
    for (size_t k = c.size(); k-- > 0;) v = v * z + c[k];
    return v;
}

Poly Poly::deriv() const {
    if (c.size() <= 1) return Poly::constant(0.0);
    std::vector<cplx> d(c.size() - 1);
    for (size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * double(k);
    return Poly(std::move(d));
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<cplx> r(std::max(c.size(), o.c.size()), cplx(0.0));
    for (size_t k = 0; k < c.size(); ++k) r[k] += c[k];
    for (size_t k = 0; k < o.c.size(); ++k) r[k] += o.c[k];
    return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + o * cplx(-1.0); }

Poly Poly::operator*(const Poly& o) const {
    if (c.empty() || o.c.empty()) return Poly::constant(0.0);
    std::vector<cplx> r(c.size() + o.c.size() - 1, cplx(0.0));
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = 0; j < o.c.size(); ++j) r[i + j] += c[i] * o.c[j];
    return Poly(std::move(r));
}

Poly Poly::operator*(cplx s) const {
    Poly r = *this;
    for (auto& x : r.c) x *= s;
    return r;
}

void Poly::trim(double tol) {
    double scale = max_coef();
    double cut = tol * scale;
    while (c.size() > 1 && std::abs(c.back()) <= cut) c.pop_back();
    if (c.empty()) c.push_back(cplx(0.0));
}

double Poly::max_coef() const {
    double m = 0.0;
    for (const auto& x : c) m = std::max(m, std::abs(x));
    return m;
}

std::vector<cplx> poly_roots(const Poly& p0) {
    Poly p = p0;
    p.trim(1e-13);
    int n = p.degree();
    if (n <= 0) return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -p.c[size_t(i)] / p.c[size_t(n)];
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<cplx> roots(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) roots[size_t(i)] = es.eigenvalues()(i);
    return roots;
}

RatFun RatFun::operator+(const RatFun& o) const {
    return {num * o.den + o.num * den, den * o.den};
}
RatFun RatFun::operator-(const RatFun& o) const {
    return {num * o.den - o.num * den, den * o.den};
}
RatFun RatFun::operator*(const RatFun& o) const { return {num * o.num, den * o.den}; }
RatFun RatFun::deriv() const { return {num.deriv() * den - num * den.deriv(), den * den}; }

RatMat RatMat::identity() {
    return {RatFun::constant(1.0), RatFun::constant(0.0), RatFun::constant(0.0),
            RatFun::constant(1.0)};
}
RatMat RatMat::operator+(const RatMat& o) const {
    return {a + o.a, b + o.b, c + o.c, d + o.d};
}
RatMat RatMat::operator*(const RatMat& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}
RatMat RatMat::operator*(const RatFun& s) const { return {a * s, b * s, c * s, d * s}; }
RatMat RatMat::deriv() const { return {a.deriv(), b.deriv(), c.deriv(), d.deriv()}; }
RatFun RatMat::det() const { return a * d - b * c; }
RatMat RatMat::adjugate() const {
    return {d, b * RatFun::constant(-1.0), c * RatFun::constant(-1.0), a};
}
Mat2 RatMat::eval(cplx z) const { return {a.eval(z), b.eval(z), c.eval(z), d.eval(z)}; }

namespace {

// principal parts of num/den at clustered roots of den
void expand_entry(const RatFun& f, int row, int col, RationalForm& out, double cluster_tol) {
    Poly num = f.num, den = f.den;
    num.trim(1e-13);
    den.trim(1e-13);
    if (num.max_coef() == 0.0) return;

    auto roots = poly_roots(den);
    // cluster
    std::vector<std::pair<cplx, int>> clusters;
    for (cplx r : roots) {
        bool merged = false;
        for (auto& cl : clusters) {
            if (std::abs(cl.first - r) <= cluster_tol * (1.0 + std::abs(r))) {
                cl.first = (cl.first * double(cl.second) + r) / double(cl.second + 1);
                cl.second += 1;
                merged = true;
                break;
            }
        }
        if (!merged) clusters.emplace_back(r, 1);
    }

    cplx lead = den.c.back();
    auto set_entry = [&](Mat2& m, cplx v) {
        if (row == 0 && col == 0) m.a = v;
        else if (row == 0 && col == 1) m.b = v;
        else if (row == 1 && col == 0) m.c = v;
        else m.d = v;
    };

    // principal part at each cluster: g(z) = num(z) / (lead * prod_other (z-r_o)^{m_o});
    // coefficient of (z-r)^{-(m-k)} is g^{(k)}(r)/k!
    for (size_t ci = 0; ci < clusters.size(); ++ci) {
        cplx r = clusters[ci].first;
        int m = clusters[ci].second;
        // evaluate g and derivatives via local Taylor samples (small circle)
        // exact alternative: divide polynomials; sampling is simpler and stable
        int nt = std::max(8, 4 * m + 8);
        double rad = 1e-3 * (1.0 + std::abs(r));
        // make sure the circle separates this cluster from the others
        for (size_t cj = 0; cj < clusters.size(); ++cj)
            if (cj != ci) rad = std::min(rad, 0.25 * std::abs(clusters[cj].first - r));
        std::vector<cplx> g(static_cast<size_t>(nt));
        for (int k = 0; k < nt; ++k) {
            double th = 2.0 * std::numbers::pi * k / nt;
            cplx zc = r + rad * cplx(std::cos(th), std::sin(th));
            cplx denv = lead;
            for (size_t cj = 0; cj < clusters.size(); ++cj) {
                if (cj == ci) continue;
                cplx dd = zc - clusters[cj].first;
                for (int q = 0; q < clusters[cj].second; ++q) denv *= dd;
            }
            g[size_t(k)] = num.eval(zc) / denv;
        }
        for (int k = 0; k < m; ++k) {
            // Taylor coefficient k of g at r
            cplx acc(0.0);
            for (int s = 0; s < nt; ++s) {
                double th = -2.0 * std::numbers::pi * k * s / nt;
                acc += g[size_t(s)] * cplx(std::cos(th), std::sin(th));
            }
            acc /= double(nt) * std::pow(rad, k);
            if (std::abs(acc) < 1e-11 * (1.0 + num.max_coef())) continue;
            Mat2 coef;
            set_entry(coef, acc);
            out.add_term(r, m - k, coef);
        }
    }

    // the polynomial (here: constant) part is recovered by the caller from
    // far-point differences once all entries are expanded
}

}  // namespace

RationalForm partial_fractions(const RatMat& m, double cluster_tol) {
    RationalForm out;
    expand_entry(m.a, 0, 0, out, cluster_tol);
    expand_entry(m.b, 0, 1, out, cluster_tol);
    expand_entry(m.c, 1, 0, out, cluster_tol);
    expand_entry(m.d, 1, 1, out, cluster_tol);
    out.compress();
    // constant part: difference at a far point
    cplx zfar(7.3, 11.1);
    Mat2 diff = m.eval(zfar) - out.eval(zfar);
    // verify it is really constant by testing a second point
    cplx zfar2(-9.2, 4.7);
    Mat2 diff2 = m.eval(zfar2) - out.eval(zfar2);
    double scale = std::max(1.0, out.max_coef());
    if ((diff - diff2).max_abs() > 1e-8 * scale)
        throw std::runtime_error("partial_fractions: nonconstant polynomial part");
    out.c0 = out.c0 + (diff + diff2) * 0.5;
    return out;
}

}  // namespace dpw
