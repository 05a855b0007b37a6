#pragma once
// Rational 1-forms on a chart of the Riemann sphere, one instance per lambda
// sample.  A form is a finite sum
//     sum_poles sum_k  C_k dz/(z-p)^k   +   C0 dz,
// with 2x2 matrix coefficients.  Behaviour at z=infinity is implicit: the
// residue there is minus the sum of the finite residues.  Moebius pullbacks
// stay inside the class (orders never grow), which is what makes the plumbing
// construction exact.

#include "dpw/loopmatrix.hpp"

namespace dpw {

// ---- Moebius map z = (a w + b) / (c w + d) --------------------------------
struct Moebius {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    static Moebius identity() { return {}; }
    // w -> t / w
    static Moebius inversion(cplx t) { return {0.0, t, 1.0, 0.0}; }

    Moebius normalized() const;
    Moebius inverse() const { return Moebius{d, -b, -c, a}.normalized(); }
    Moebius compose(const Moebius& o) const {  // this(o(w))
        return Moebius{a * o.a + b * o.c, a * o.b + b * o.d,
                       c * o.a + d * o.c, c * o.b + d * o.d}.normalized();
    }
    cplx operator()(cplx w) const { return (a * w + b) / (c * w + d); }
    cplx deriv(cplx w) const {
        cplx q = c * w + d;
        return (a * d - b * c) / (q * q);
    }
    cplx apply_inv(cplx z) const { return (d * z - b) / (-c * z + a); }
    bool maps_infinity_to_infinity() const;
    cplx image_of_infinity() const { return a / c; }
    cplx preimage_of_infinity() const { return -d / c; }
};

// ---- rational 1-form -------------------------------------------------------
struct PoleTerm {
    cplx p;
    std::vector<Mat2> c;  // c[k] multiplies dz/(z-p)^{k+1}
    int order() const { return int(c.size()); }
};

struct RationalForm {
    std::vector<PoleTerm> poles;
    Mat2 c0;  // constant dz coefficient

    void add_simple(cplx p, const Mat2& res);
    void add_double(cplx p, const Mat2& coef);
    void add_term(cplx p, int order, const Mat2& coef);
    void add(const RationalForm& o);
    void scale(cplx s);

    // coefficient of dz at z
    Mat2 eval(cplx z) const;
    // residue: sum of order-1 coefficients of poles within tol of p
    Mat2 residue(cplx p, double tol = 1e-6) const;
    // Laurent expansion at p0: res = coefficient of 1/(z-p0), reg = constant
    // coefficient contributed by everything else (poles at p0 included exactly)
    struct Laurent { Mat2 res, reg; };
    Laurent laurent(cplx p0, double tol = 1e-6) const;

    // merge terms with coinciding pole locations, drop negligible ones
    void compress(double pos_tol = 1e-9, double coef_tol = 0.0);

    // pullback under z = phi(w); only defined for orders <= 2
    RationalForm pullback(const Moebius& phi) const;

    double max_coef() const;
};

// omega_q = dz/(z-q) - qb dz/(qb z - 1), the form with residues +1 at q and
// -1 at 1/qb; qb is the conjugate-loop value at the same sample.  For qb ~ 0
// the second pole sits at infinity and is left implicit.
RationalForm std_form_node(cplx q, cplx qb, const Mat2& coef);
// omega_{p,q} = dz/(z-p) - (1/2) dz/(z-q) - (qb/2) dz/(qb z - 1)
RationalForm std_form_halfpair(cplx p, cplx q, cplx qb, const Mat2& coef);

// contour integral of the form along the circle |z - center| = r (trapezoid
// rule, spectrally accurate for rational integrands off the contour)
Mat2 contour_integral(const RationalForm& f, cplx center, double r, int n = 512);

// line integral along the straight segment or a parametrized arc
Mat2 segment_integral(const RationalForm& f, cplx z0, cplx z1, int n = 256);

// ---- dense polynomial / rational helpers (for gauges) ----------------------
struct Poly {
    std::vector<cplx> c;  // ascending, c[k] z^k

    Poly() = default;
    explicit Poly(std::vector<cplx> cc) : c(std::move(cc)) { trim(); }
    static Poly constant(cplx v) { return Poly({v}); }
    static Poly linear(cplx c0, cplx c1) { return Poly({c0, c1}); }  // c0 + c1 z

    int degree() const { return int(c.size()) - 1; }
    cplx eval(cplx z) const;
    Poly deriv() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(cplx s) const;
    void trim(double tol = 0.0);
    double max_coef() const;
};

// roots via companion-matrix eigenvalues
std::vector<cplx> poly_roots(const Poly& p);

struct RatFun {
    Poly num, den;  // den monic-ish, nonzero

    static RatFun zero() { return {Poly::constant(0.0), Poly::constant(1.0)}; }
    static RatFun constant(cplx v) { return {Poly::constant(v), Poly::constant(1.0)}; }
    static RatFun of(Poly n, Poly d) { return {std::move(n), std::move(d)}; }

    cplx eval(cplx z) const { return num.eval(z) / den.eval(z); }
    RatFun operator+(const RatFun& o) const;
    RatFun operator-(const RatFun& o) const;
    RatFun operator*(const RatFun& o) const;
    RatFun deriv() const;
};

// 2x2 matrix of rational functions; sandwich + derivative arithmetic used by
// the gauge action
struct RatMat {
    RatFun a, b, c, d;
    static RatMat identity();
    RatMat operator+(const RatMat& o) const;
    RatMat operator*(const RatMat& o) const;
    RatMat operator*(const RatFun& s) const;
    RatMat deriv() const;
    RatFun det() const;
    RatMat adjugate() const;
    Mat2 eval(cplx z) const;
};

// expand a matrix rational function (interpreted as the dz-coefficient) into
// pole terms; throws if a nonconstant polynomial part remains
RationalForm partial_fractions(const RatMat& m, double cluster_tol = 1e-7);

}  // namespace dpw
