#include "dpw/loopmatrix.hpp"

namespace dpw {

Mat2 mat_fun(const Mat2& A, cplx (*f)(cplx), cplx (*fprime)(cplx)) {
    cplx s = A.tr() * 0.5;
    Mat2 T = A - Mat2::diag(s, s);           // trace-free part, eigenvalues +-mu
    cplx mu2 = -T.det();                      // mu^2
    cplx mu = std::sqrt(mu2);
    cplx e1 = s + mu, e2 = s - mu;
    cplx c0 = 0.5 * (f(e1) + f(e2));
    cplx c1;
    double scale = std::max(1e-300, A.norm());
    if (std::abs(mu) > 1e-8 * scale) c1 = (f(e1) - f(e2)) / (e1 - e2);
    else c1 = fprime(s);                      // confluent limit
    return Mat2::diag(c0, c0) + T * c1;
}

static cplx f_exp(cplx z) { return std::exp(z); }
static cplx f_log(cplx z) { return std::log(z); }
static cplx f_log_d(cplx z) { return 1.0 / z; }
static cplx f_sqrt(cplx z) { return std::sqrt(z); }
static cplx f_sqrt_d(cplx z) { return 0.5 / std::sqrt(z); }

Mat2 mat_exp(const Mat2& A) { return mat_fun(A, f_exp, f_exp); }
Mat2 mat_log(const Mat2& A) { return mat_fun(A, f_log, f_log_d); }
Mat2 mat_sqrt(const Mat2& A) { return mat_fun(A, f_sqrt, f_sqrt_d); }

Mat2 mat_pow(const Mat2& A, cplx s) {
    return mat_exp(mat_log(A) * s);
}

SampledMatrix sample(const LoopMatrix& m, const CircleGrid& g) {
    SampledMatrix v(size_t(g.total()));
    for (int i = 0; i <= g.M; ++i) v[size_t(i)] = m.eval(g.lambda[size_t(i)]);
    return v;
}

LoopMatrix coefficients(const SampledMatrix& v, const CircleGrid& g) {
    std::vector<cplx> sa(size_t(g.total())), sb(sa), sc(sa), sd(sa);
    for (size_t i = 0; i < v.size(); ++i) {
        sa[i] = v[i].a;
        sb[i] = v[i].b;
        sc[i] = v[i].c;
        sd[i] = v[i].d;
    }
    return {coefficients(sa, g), coefficients(sb, g), coefficients(sc, g), coefficients(sd, g)};
}

SampledMatrix sm_identity(const CircleGrid& g) {
    return SampledMatrix(size_t(g.total()), Mat2::id());
}

SampledMatrix sm_mul(const SampledMatrix& x, const SampledMatrix& y) {
    SampledMatrix out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
    return out;
}

SampledMatrix sm_inv(const SampledMatrix& x) {
    SampledMatrix out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = x[i].inv();
    return out;
}

SampledMatrix sm_add(const SampledMatrix& x, const SampledMatrix& y) {
    SampledMatrix out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
    return out;
}

SampledMatrix sm_scale(const SampledMatrix& x, cplx s) {
    SampledMatrix out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] * s;
    return out;
}

SampledMatrix sm_apply(const SampledMatrix& x, Mat2 (*f)(const Mat2&)) {
    SampledMatrix out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
    return out;
}

double sm_dist(const SampledMatrix& x, const SampledMatrix& y) {
    double m = 0.0;
    for (size_t i = 0; i < x.size(); ++i) m = std::max(m, (x[i] - y[i]).max_abs());
    return m;
}

SampledMatrix sm_bar(const SampledMatrix& x, const CircleGrid& g) {
    SampledMatrix out(x.size());
    for (int m = 0; m < g.M; ++m)
        out[size_t(m)] = x[size_t(g.M - 1 - m)].conj_entries();
    out[size_t(g.M)] = x[size_t(g.M)].conj_entries();  // lambda = 1 is self-paired
    return out;
}

Mat2 su2_from_vec(const Vec3& v) {
    cplx i(0.0, 1.0);
    return Mat2{-i * cplx(-v.z), -i * cplx(v.x, v.y),
                -i * cplx(v.x, -v.y), -i * cplx(v.z)};
}

Vec3 vec_from_su2(const Mat2& m0) {
    // project onto su(2): anti-hermitian, trace-free
    Mat2 m = (m0 - m0.herm()) * 0.5;
    cplx t = m.tr() * 0.5;
    m = m - Mat2::diag(t, t);
    return {-m.b.imag(), m.b.real(), m.a.imag()};
}

}  // namespace dpw
