#pragma once
// Scalar loops: finite Fourier series f(lambda) = sum_{i=-N..N} f_i lambda^i
// equipped with the weighted norm  ||f|| = sum |f_i| rho^|i|  (rho > 1),
// which is submultiplicative, so truncated products come with a computable
// dropped-tail bound.

#include <complex>
#include <vector>
#include <stdexcept>
#include <cmath>

namespace dpw {

using cplx = std::complex<double>;

class LoopScalar {
public:
    LoopScalar() : rho_(1.2), coef_(1, cplx(0.0)) {}
    LoopScalar(int degree, double rho)
        : rho_(rho), coef_(2 * degree + 1, cplx(0.0)) {
        if (degree < 0 || rho <= 1.0) throw std::invalid_argument("LoopScalar: need degree >= 0, rho > 1");
    }
    static LoopScalar constant(cplx v, int degree, double rho) {
        LoopScalar f(degree, rho);
        f.set(0, v);
        return f;
    }
    // the loop lambda^k
    static LoopScalar monomial(int k, cplx v, int degree, double rho) {
        LoopScalar f(degree, rho);
        f.set(k, v);
        return f;
    }

    int degree() const { return (int(coef_.size()) - 1) / 2; }
    double rho() const { return rho_; }

    cplx get(int i) const {
        int N = degree();
        if (i < -N || i > N) return cplx(0.0);
        return coef_[size_t(i + N)];
    }
    void set(int i, cplx v) {
        int N = degree();
        if (i < -N || i > N) throw std::out_of_range("LoopScalar::set: index beyond degree");
        coef_[size_t(i + N)] = v;
    }

    double norm() const {
        double s = 0.0;
        int N = degree();
        for (int i = -N; i <= N; ++i) s += std::abs(get(i)) * std::pow(rho_, std::abs(i));
        return s;
    }

    // change the stored degree, keeping modes; growing pads with zeros,
    // shrinking reports the weighted norm of what fell off.
    LoopScalar resized(int newdeg, double* dropped = nullptr) const;

    LoopScalar operator-() const;
    LoopScalar operator+(const LoopScalar& g) const;
    LoopScalar operator-(const LoopScalar& g) const;
    // truncated product: full convolution, modes beyond max(deg_f, deg_g)
    // dropped; their weighted norm is added to *dropped if given.
    LoopScalar mul(const LoopScalar& g, double* dropped = nullptr) const;
    LoopScalar operator*(const LoopScalar& g) const { return mul(g); }
    LoopScalar operator*(cplx s) const;
    LoopScalar operator*(double s) const { return (*this) * cplx(s); }

    // involutions
    LoopScalar bar() const;   // conjugate coefficients:    bar(f)_i = conj(f_i)
    LoopScalar star() const;  // adjoint on the circle:     f*_i    = conj(f_{-i})
    LoopScalar re() const;    // (f + bar f)/2
    LoopScalar im() const;    // (f - bar f)/(2i)

    // canonical splitting f = minus + zero + plus
    LoopScalar minus_part() const;  // modes < 0
    LoopScalar plus_part() const;   // modes > 0
    cplx zero_part() const { return get(0); }
    LoopScalar nonneg_part() const; // modes >= 0

    // value and lambda-derivative at a point of C^*
    cplx eval(cplx lambda) const;
    cplx deriv(cplx lambda) const;

    // membership predicates (up to tolerance)
    double max_abs_below(int imin) const;  // max |f_i| over i < imin
    bool is_plus(double tol) const { return max_abs_below(1) <= tol; }
    bool is_nonneg(double tol) const { return max_abs_below(0) <= tol; }
    bool is_real_coeff(double tol) const;  // f in W_R: Im f_i = 0

private:
    double rho_;
    std::vector<cplx> coef_;  // coef_[i + N] holds f_i
    static void check_compatible(const LoopScalar& a, const LoopScalar& b);
    friend LoopScalar lift_degree(const LoopScalar&, int);
};

LoopScalar operator*(cplx s, const LoopScalar& f);
LoopScalar operator*(double s, const LoopScalar& f);

// ---------------------------------------------------------------------------
// Sampling grid on the unit circle.  M uniform points with a half-step offset
// (so lambda = +-1 are never grid points; renormalizations that divide by
// (lambda-1)^2 stay finite sample-wise), plus one extra exact sample at
// lambda = 1 carried through every pointwise pipeline.  Index M is lambda=1.
struct CircleGrid {
    int N;        // coefficient degree of reconstructed views
    double rho;
    int M;        // number of uniform samples
    std::vector<cplx> lambda;  // size M+1, lambda[M] = 1

    CircleGrid(int N_, double rho_, int M_ = 0);
    int total() const { return M + 1; }
};

// values of f on grid.lambda (all M+1 slots)
std::vector<cplx> sample(const LoopScalar& f, const CircleGrid& g);
// inverse DFT of the M uniform samples, truncated to degree g.N;
// aliasing (and nothing else) limits its accuracy.
LoopScalar coefficients(const std::vector<cplx>& samples, const CircleGrid& g);

// apply an arbitrary pointwise map and reconstruct coefficients
template <class F>
LoopScalar sample_transform(const LoopScalar& f, const CircleGrid& g, F&& fn) {
    auto v = sample(f, g);
    for (auto& x : v) x = fn(x);
    return coefficients(v, g);
}

LoopScalar reciprocal(const LoopScalar& f, const CircleGrid& g);

}  // namespace dpw
