#pragma once
// 2x2 matrices with loop-scalar entries, plus the pointwise (per-lambda-sample)
// representation used by the ODE transport and matrix-function code.

#include "dpw/wiener.hpp"

#include <array>

namespace dpw {

// ---- plain complex 2x2 -----------------------------------------------------
struct Mat2 {
    cplx a{0.0}, b{0.0}, c{0.0}, d{0.0};  // [[a, b], [c, d]]

    static Mat2 id() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 diag(cplx x, cplx y) { return {x, 0.0, 0.0, y}; }

    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2 operator-() const { return {-a, -b, -c, -d}; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator*(cplx s) const { return {a * s, b * s, c * s, d * s}; }
    Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }

    cplx det() const { return a * d - b * c; }
    cplx tr() const { return a + d; }
    Mat2 inv() const {
        cplx dt = det();
        return Mat2{d, -b, -c, a} * (1.0 / dt);
    }
    Mat2 adjugate() const { return {d, -b, -c, a}; }
    Mat2 herm() const {  // conjugate transpose
        return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)};
    }
    Mat2 conj_entries() const { return {std::conj(a), std::conj(b), std::conj(c), std::conj(d)}; }
    double norm() const {  // Frobenius
        return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
    }
    double max_abs() const {
        return std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(c), std::abs(d)));
    }
};

inline Mat2 operator*(cplx s, const Mat2& m) { return m * s; }
inline Mat2 operator*(double s, const Mat2& m) { return m * s; }

// analytic functions of a 2x2 matrix via spectral decomposition
// f(A) = f((e1+e2)/2 +- spread) applied on eigenvalues, with the confluent
// limit handled by the derivative.
Mat2 mat_fun(const Mat2& A, cplx (*f)(cplx), cplx (*fprime)(cplx));
Mat2 mat_exp(const Mat2& A);
Mat2 mat_log(const Mat2& A);   // principal branch; needs spectrum off (-inf, 0]
Mat2 mat_sqrt(const Mat2& A);  // principal branch
Mat2 mat_pow(const Mat2& A, cplx s);  // exp(s log A)

// ---- loop-coefficient matrix ----------------------------------------------
struct LoopMatrix {
    LoopScalar a, b, c, d;

    LoopMatrix() = default;
    LoopMatrix(int N, double rho)
        : a(N, rho), b(N, rho), c(N, rho), d(N, rho) {}
    LoopMatrix(LoopScalar a_, LoopScalar b_, LoopScalar c_, LoopScalar d_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}
    static LoopMatrix identity(int N, double rho) {
        LoopMatrix m(N, rho);
        m.a.set(0, 1.0);
        m.d.set(0, 1.0);
        return m;
    }

    LoopMatrix operator+(const LoopMatrix& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    LoopMatrix operator-(const LoopMatrix& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    LoopMatrix mul(const LoopMatrix& o, double* dropped = nullptr) const {
        return {a.mul(o.a, dropped) + b.mul(o.c, dropped), a.mul(o.b, dropped) + b.mul(o.d, dropped),
                c.mul(o.a, dropped) + d.mul(o.c, dropped), c.mul(o.b, dropped) + d.mul(o.d, dropped)};
    }
    LoopMatrix operator*(const LoopMatrix& o) const { return mul(o); }
    LoopMatrix operator*(cplx s) const { return {a * s, b * s, c * s, d * s}; }

    LoopMatrix bar() const { return {a.bar(), b.bar(), c.bar(), d.bar()}; }
    // adjoint loop: (M*)(lambda) = M(lambda)^H on the circle
    LoopMatrix star() const { return {a.star(), c.star(), b.star(), d.star()}; }

    Mat2 eval(cplx lambda) const {
        return {a.eval(lambda), b.eval(lambda), c.eval(lambda), d.eval(lambda)};
    }
    Mat2 deriv(cplx lambda) const {
        return {a.deriv(lambda), b.deriv(lambda), c.deriv(lambda), d.deriv(lambda)};
    }
    double norm() const { return a.norm() + b.norm() + c.norm() + d.norm(); }
};

// ---- sampled matrix (values on a CircleGrid, slot M = lambda=1) ------------
using SampledMatrix = std::vector<Mat2>;

SampledMatrix sample(const LoopMatrix& m, const CircleGrid& g);
LoopMatrix coefficients(const SampledMatrix& v, const CircleGrid& g);

SampledMatrix sm_identity(const CircleGrid& g);
SampledMatrix sm_mul(const SampledMatrix& x, const SampledMatrix& y);
SampledMatrix sm_inv(const SampledMatrix& x);
SampledMatrix sm_add(const SampledMatrix& x, const SampledMatrix& y);
SampledMatrix sm_scale(const SampledMatrix& x, cplx s);
SampledMatrix sm_apply(const SampledMatrix& x, Mat2 (*f)(const Mat2&));
double sm_dist(const SampledMatrix& x, const SampledMatrix& y);

// conjugation-symmetry helper: the sample of bar(f) at lambda_m equals
// conj(sample of f at conj(lambda_m)); the half-offset grid is closed under
// conjugation with index m <-> M-1-m.
SampledMatrix sm_bar(const SampledMatrix& x, const CircleGrid& g);

// su(2) <-> R^3 (x1,x2,x3) ~ -i[[-x3, x1+i x2],[x1-i x2, x3]]
struct Vec3 {
    double x{0}, y{0}, z{0};
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
};

Mat2 su2_from_vec(const Vec3& v);
Vec3 vec_from_su2(const Mat2& m);  // uses the anti-hermitian trace-free part

}  // namespace dpw
