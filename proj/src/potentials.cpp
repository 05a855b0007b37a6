#include "dpw/potentials.hpp"

#include "dpw/iwasawa.hpp"

namespace dpw {

Mat2 s_matrix(cplx lambda) { return {0.0, 1.0 / lambda, lambda, 0.0}; }

Mat2 phi_S(cplx z, cplx lambda) {
    cplx s = 0.5 / std::sqrt(z);
    return {s * (z + 1.0), s * (z - 1.0) / lambda,
            s * lambda * (z - 1.0), s * (z + 1.0)};
}

Mat2 phi_C(cplx z) {
    cplx s = 0.5 / std::sqrt(z);
    return {s * (z + 1.0), s * (z - 1.0), s * (z - 1.0), s * (z + 1.0)};
}

Mat2 phi_S_circle(double theta, cplx lambda) {
    cplx co = std::cos(theta / 2.0), si = cplx(0.0, 1.0) * std::sin(theta / 2.0);
    return {co, si / lambda, si * lambda, co};
}

Mat2 phi_C_circle(double theta) {
    cplx co = std::cos(theta / 2.0), si = cplx(0.0, 1.0) * std::sin(theta / 2.0);
    return {co, si, si, co};
}

Mat2 F_S(cplx z, cplx lambda) {
    double r2 = std::norm(z);
    double s = 1.0 / std::sqrt(2.0 * (1.0 + r2));
    cplx zb = std::conj(z);
    double theta = std::arg(z);
    cplx ph = std::polar(1.0, theta / 2.0);
    Mat2 u{s * (zb + 1.0), s * (z - 1.0) / lambda,
           s * lambda * (1.0 - zb), s * (z + 1.0)};
    return u * Mat2::diag(ph, 1.0 / ph);
}

Mat2 B_S(cplx z, cplx lambda) {
    double r = std::abs(z), r2 = std::norm(z);
    double s = 1.0 / (std::sqrt(2.0 * r) * std::sqrt(1.0 + r2));
    return {s * 2.0 * r, 0.0, s * lambda * (r2 - 1.0), s * (1.0 + r2)};
}

Mat2 G_S(cplx z, cplx lambda) {
    cplx sq = std::sqrt(z);
    return {(1.0 + z) / sq, 0.0, lambda * (1.0 - z) / sq, sq / (1.0 + z)};
}

Vec3 f_S(cplx z) {
    double r2 = std::norm(z);
    double s = 1.0 / (1.0 + r2);
    return {s * (1.0 - r2), s * (-2.0 * z.imag()), s * std::norm(z - 1.0)};
}

Vec3 N_S(cplx z) {
    double s = 1.0 / (1.0 + std::norm(z));
    return {s * (std::norm(z) - 1.0), s * 2.0 * z.imag(), s * 2.0 * z.real()};
}

Vec3 N_C(cplx z) {
    double s = 1.0 / (1.0 + std::norm(z));
    return {s * (1.0 - std::norm(z)), s * 2.0 * z.imag(), s * 2.0 * z.real()};
}

Vec3 psi_motion(const Vec3& v) { return {1.0 - v.z, -v.y, -v.x}; }

Vec3 inv_stereo(cplx z) {
    double s = 1.0 / (1.0 + std::norm(z));
    return {s * 2.0 * z.real(), s * 2.0 * z.imag(), s * (std::norm(z) - 1.0)};
}

namespace {
Mat2 a_part(cplx z, cplx lambda) {
    return {z + 1.0, (z - 1.0) / lambda, lambda * (z - 1.0), z + 1.0};
}
Mat2 a_part_dz(cplx lambda) { return {1.0, 1.0 / lambda, lambda, 1.0}; }
}  // namespace

Mat2 phi_S_sandwich(cplx z, cplx lambda, const Mat2& m) {
    Mat2 a = a_part(z, lambda);
    return a * m * a.adjugate() * (0.25 / z);
}

Mat2 phi_S_sandwich_dz(cplx z, cplx lambda, const Mat2& m) {
    Mat2 a = a_part(z, lambda);
    Mat2 ap = a_part_dz(lambda);
    Mat2 core = ap * m * a.adjugate() + a * m * ap.adjugate();
    return core * (0.25 / z) - a * m * a.adjugate() * (0.25 / (z * z));
}

LoopMatrix phi_S_loop(cplx z, int N, double rho) {
    cplx s = 0.5 / std::sqrt(z);
    LoopMatrix m(N, rho);
    m.a.set(0, s * (z + 1.0));
    m.b.set(-1, s * (z - 1.0));
    m.c.set(1, s * (z - 1.0));
    m.d.set(0, s * (z + 1.0));
    return m;
}

LoopMatrix F_S_loop(cplx z, int N, double rho) {
    double s = 1.0 / std::sqrt(2.0 * (1.0 + std::norm(z)));
    cplx zb = std::conj(z);
    cplx ph = std::polar(1.0, std::arg(z) / 2.0);
    LoopMatrix m(N, rho);
    m.a.set(0, s * (zb + 1.0) * ph);
    m.b.set(-1, s * (z - 1.0) / ph);
    m.c.set(1, s * (1.0 - zb) * ph);
    m.d.set(0, s * (z + 1.0) / ph);
    return m;
}

LoopMatrix B_S_loop(cplx z, int N, double rho) {
    double r = std::abs(z), r2 = std::norm(z);
    double s = 1.0 / (std::sqrt(2.0 * r) * std::sqrt(1.0 + r2));
    LoopMatrix m(N, rho);
    m.a.set(0, s * 2.0 * r);
    m.c.set(1, s * (r2 - 1.0));
    m.d.set(0, s * (1.0 + r2));
    return m;
}

RationalForm xi_S(cplx lambda) {
    RationalForm f;
    f.add_simple(0.0, s_matrix(lambda) * 0.5);
    return f;
}

RationalForm xi_C() {
    RationalForm f;
    f.add_simple(0.0, Mat2{0.0, 0.5, 0.5, 0.0});
    return f;
}

RationalForm delaunay_xi(double r, double s, cplx lambda) {
    RationalForm f;
    f.add_simple(0.0, Mat2{0.0, r / lambda + s, r * lambda + s, 0.0});
    return f;
}

RationalForm dual_form(const RationalForm& f, cplx lambda) {
    RationalForm out;
    out.c0 = dual_conj(f.c0, lambda);
    for (const auto& t : f.poles) {
        PoleTerm s;
        s.p = t.p;
        for (const auto& m : t.c) s.c.push_back(dual_conj(m, lambda));
        out.poles.push_back(std::move(s));
    }
    return out;
}

RatMat gauge_vertex_rational(cplx lambda, cplx x, cplx y) {
    RatMat h;
    h.a = RatFun::of(Poly::linear(1.0, 1.0), Poly::constant(1.0));
    h.b = RatFun::zero();
    // lambda (x(1-z) + i y(1+z)) = lambda ((x+iy) + (iy-x) z)
    cplx iy = cplx(0.0, 1.0) * y;
    h.c = RatFun::of(Poly::linear(lambda * (x + iy), lambda * (iy - x)),
                     Poly::constant(1.0));
    h.d = RatFun::of(Poly::linear(0.0, 1.0), Poly::linear(1.0, 1.0));
    return h;
}

RatMat gauge_edge_rational(cplx x, cplx y) {
    RatMat h;
    h.a = RatFun::of(Poly::linear(0.0, 1.0), Poly::linear(1.0, 1.0));
    cplx iy = cplx(0.0, 1.0) * y;
    h.b = RatFun::of(Poly::linear(x + iy, iy - x), Poly::constant(1.0));
    h.c = RatFun::zero();
    h.d = RatFun::of(Poly::linear(1.0, 1.0), Poly::constant(1.0));
    return h;
}

Mat2 gauge_pointwise(const Mat2& xi_val, const RatMat& h, const RatMat& hinv,
                     const RatMat& hprime, double c, cplx z) {
    Mat2 hv = h.eval(z), hi = hinv.eval(z), hp = hprime.eval(z);
    return hi * xi_val * hv + hi * hp + Mat2::id() * (c / z);
}

RationalForm gauge_rational(const RatMat& xi, const RatMat& h, const RatMat& hinv,
                            const RatMat& hprime, double c) {
    RatMat total = hinv * xi * h + hinv * hprime;
    // fold the (c/z) I term into the rational matrix
    RatFun cz = RatFun::of(Poly::constant(c), Poly::linear(0.0, 1.0));
    total.a = total.a + cz;
    total.d = total.d + cz;
    return partial_fractions(total);
}

}  // namespace dpw
