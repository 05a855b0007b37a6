#include "dpw/wiener.hpp"

#include <numbers>

namespace dpw {

void LoopScalar::check_compatible(const LoopScalar& a, const LoopScalar& b) {
    if (std::abs(a.rho_ - b.rho_) > 1e-14)
        throw std::invalid_argument("LoopScalar: mixing different rho weights");
}

LoopScalar lift_degree(const LoopScalar& f, int N) {
    if (f.degree() == N) return f;
    return f.resized(N);
}

LoopScalar LoopScalar::resized(int newdeg, double* dropped) const {
    LoopScalar out(newdeg, rho_);
    int N = degree();
    for (int i = -N; i <= N; ++i) {
        if (i >= -newdeg && i <= newdeg) out.set(i, get(i));
        else if (dropped) *dropped += std::abs(get(i)) * std::pow(rho_, std::abs(i));
    }
    return out;
}

LoopScalar LoopScalar::operator-() const {
    LoopScalar out = *this;
    for (auto& c : out.coef_) c = -c;
    return out;
}

LoopScalar LoopScalar::operator+(const LoopScalar& g) const {
    check_compatible(*this, g);
    int N = std::max(degree(), g.degree());
    LoopScalar out(N, rho_);
    for (int i = -N; i <= N; ++i) out.set(i, get(i) + g.get(i));
    return out;
}

LoopScalar LoopScalar::operator-(const LoopScalar& g) const { return *this + (-g); }

LoopScalar LoopScalar::mul(const LoopScalar& g, double* dropped) const {
    check_compatible(*this, g);
    int Na = degree(), Nb = g.degree();
    int N = std::max(Na, Nb);
    LoopScalar out(N, rho_);
    for (int i = -Na - Nb; i <= Na + Nb; ++i) {
        cplx s(0.0);
        int lo = std::max(-Na, i - Nb), hi = std::min(Na, i + Nb);
        for (int j = lo; j <= hi; ++j) s += get(j) * g.get(i - j);
        if (i >= -N && i <= N) out.set(i, s);
        else if (dropped) *dropped += std::abs(s) * std::pow(rho_, std::abs(i));
    }
    return out;
}

LoopScalar LoopScalar::operator*(cplx s) const {
    LoopScalar out = *this;
    for (auto& c : out.coef_) c *= s;
    return out;
}

LoopScalar operator*(cplx s, const LoopScalar& f) { return f * s; }
LoopScalar operator*(double s, const LoopScalar& f) { return f * cplx(s); }

LoopScalar LoopScalar::bar() const {
    LoopScalar out = *this;
    for (auto& c : out.coef_) c = std::conj(c);
    return out;
}

LoopScalar LoopScalar::star() const {
    int N = degree();
    LoopScalar out(N, rho_);
    for (int i = -N; i <= N; ++i) out.set(i, std::conj(get(-i)));
    return out;
}

LoopScalar LoopScalar::re() const {
    LoopScalar out = *this;
    for (auto& c : out.coef_) c = cplx(c.real(), 0.0);
    return out;
}

LoopScalar LoopScalar::im() const {
    LoopScalar out = *this;
    for (auto& c : out.coef_) c = cplx(c.imag(), 0.0);
    return out;
}

LoopScalar LoopScalar::minus_part() const {
    LoopScalar out(degree(), rho_);
    for (int i = -degree(); i < 0; ++i) out.set(i, get(i));
    return out;
}

LoopScalar LoopScalar::plus_part() const {
    LoopScalar out(degree(), rho_);
    for (int i = 1; i <= degree(); ++i) out.set(i, get(i));
    return out;
}

LoopScalar LoopScalar::nonneg_part() const {
    LoopScalar out(degree(), rho_);
    for (int i = 0; i <= degree(); ++i) out.set(i, get(i));
    return out;
}

cplx LoopScalar::eval(cplx lambda) const {
    // split Horner: positive modes in lambda, negative in 1/lambda
    int N = degree();
    cplx up(0.0), dn(0.0), il = 1.0 / lambda;
    for (int i = N; i >= 1; --i) {
        up = (up + get(i)) * lambda;
        dn = (dn + get(-i)) * il;
    }
    return up + dn + get(0);
}

cplx LoopScalar::deriv(cplx lambda) const {
    int N = degree();
    cplx s(0.0);
    for (int i = -N; i <= N; ++i) {
        if (i == 0) continue;
        s += get(i) * cplx(double(i)) * std::pow(lambda, i - 1);
    }
    return s;
}

double LoopScalar::max_abs_below(int imin) const {
    double m = 0.0;
    for (int i = -degree(); i < imin; ++i) m = std::max(m, std::abs(get(i)));
    return m;
}

bool LoopScalar::is_real_coeff(double tol) const {
    for (int i = -degree(); i <= degree(); ++i)
        if (std::abs(get(i).imag()) > tol) return false;
    return true;
}

// ---------------------------------------------------------------------------

CircleGrid::CircleGrid(int N_, double rho_, int M_) : N(N_), rho(rho_), M(M_) {
    if (M == 0) {
        M = 64;
        while (M < 4 * N + 4) M *= 2;
    }
    if (M < 2 * N + 1) throw std::invalid_argument("CircleGrid: M too small for degree N");
    lambda.resize(size_t(M) + 1);
    for (int m = 0; m < M; ++m) {
        double th = 2.0 * std::numbers::pi * (m + 0.5) / M;
        lambda[size_t(m)] = cplx(std::cos(th), std::sin(th));
    }
    lambda[size_t(M)] = cplx(1.0, 0.0);
}

std::vector<cplx> sample(const LoopScalar& f, const CircleGrid& g) {
    std::vector<cplx> v(size_t(g.M) + 1);
    for (int m = 0; m <= g.M; ++m) v[size_t(m)] = f.eval(g.lambda[size_t(m)]);
    return v;
}

LoopScalar coefficients(const std::vector<cplx>& s, const CircleGrid& g) {
    LoopScalar f(g.N, g.rho);
    for (int i = -g.N; i <= g.N; ++i) {
        cplx acc(0.0);
        for (int m = 0; m < g.M; ++m) {
            double th = -2.0 * std::numbers::pi * i * (m + 0.5) / g.M;
            acc += s[size_t(m)] * cplx(std::cos(th), std::sin(th));
        }
        f.set(i, acc / double(g.M));
    }
    return f;
}

LoopScalar reciprocal(const LoopScalar& f, const CircleGrid& g) {
    return sample_transform(f, g, [](cplx v) {
        if (std::abs(v) < 1e-300) throw std::domain_error("reciprocal: zero on the circle");
        return 1.0 / v;
    });
}

}  // namespace dpw
