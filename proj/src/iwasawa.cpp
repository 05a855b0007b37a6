#include "dpw/iwasawa.hpp"

#include <deque>

namespace dpw {

namespace {

// lower-triangular Cholesky factor of a 2x2 hermitian positive matrix
Mat2 chol2(const Mat2& s) {
    double s11 = s.a.real();
    if (s11 <= 0.0) throw std::runtime_error("iwasawa: Gram matrix not positive definite");
    cplx l11(std::sqrt(s11));
    cplx l21 = s.c / l11;
    double rem = s.d.real() - std::norm(l21);
    if (rem <= 0.0) throw std::runtime_error("iwasawa: Gram matrix not positive definite");
    return {l11, 0.0, l21, cplx(std::sqrt(rem))};
}

Mat2 solve_upper_right(const Mat2& rhs, const Mat2& u) {
    // X * u = rhs with u upper triangular (u = Ljj^H)
    // column form: x11 u11 = r11 ... do it directly
    cplx x11 = rhs.a / u.a;
    cplx x12 = (rhs.b - x11 * u.b) / u.d;
    cplx x21 = rhs.c / u.a;
    cplx x22 = (rhs.d - x21 * u.b) / u.d;
    return {x11, x12, x21, x22};
}

}  // namespace

IwasawaResult iwasawa(const LoopMatrix& phi, const CircleGrid& g, const IwasawaOptions& opt) {
    const int N = g.N;
    const double rho = g.rho;

    // Gram loop at full product degree: M_k, |k| <= 2N, M_{-k} = M_k^H.
    const int bw = 2 * std::max(std::max(phi.a.degree(), phi.b.degree()),
                                std::max(phi.c.degree(), phi.d.degree()));
    LoopMatrix phs = phi.star();
    auto conv_entry = [&](const LoopScalar& f, const LoopScalar& h, int k) {
        cplx s(0.0);
        int Nf = f.degree(), Nh = h.degree();
        for (int j = std::max(-Nf, k - Nh); j <= std::min(Nf, k + Nh); ++j)
            s += f.get(j) * h.get(k - j);
        return s;
    };
    std::vector<Mat2> Mk(size_t(2 * bw + 1));
    for (int k = -bw; k <= bw; ++k) {
        Mat2 m;
        m.a = conv_entry(phs.a, phi.a, k) + conv_entry(phs.b, phi.c, k);
        m.b = conv_entry(phs.a, phi.b, k) + conv_entry(phs.b, phi.d, k);
        m.c = conv_entry(phs.c, phi.a, k) + conv_entry(phs.d, phi.c, k);
        m.d = conv_entry(phs.c, phi.b, k) + conv_entry(phs.d, phi.d, k);
        Mk[size_t(k + bw)] = m;
    }
    auto Mblock = [&](int diff) {  // T_{ij} = M_{j-i}
        if (diff < -bw || diff > bw) return Mat2{};
        return Mk[size_t(diff + bw)];
    };

    // streaming banded block Cholesky; keep the last bw+1 rows.
    // Row i is stored dense over its band, indexed by j - max(0, i-bw).
    const int min_rows = opt.min_rows > 0 ? opt.min_rows : std::max(8, 4 * N);
    std::deque<std::vector<Mat2>> rows;
    auto getL = [&](int i, int j, int cur_i) -> Mat2 {
        int back = cur_i - i;
        if (back < 0 || back >= int(rows.size())) return Mat2{};
        const auto& row = rows[rows.size() - 1 - size_t(back)];
        int lo = std::max(0, i - bw);
        if (j < lo || j > i) return Mat2{};
        return row[size_t(j - lo)];
    };

    std::vector<Mat2> prev_extract, extract;
    double row_res = 1e300;
    int i = 0;
    for (; i < opt.max_rows; ++i) {
        int lo = std::max(0, i - bw);
        std::vector<Mat2> row(size_t(i - lo + 1));
        for (int j = lo; j <= i; ++j) {
            Mat2 s = Mblock(j - i);  // T[i][j]
            int klo = std::max(lo, std::max(0, j - bw));
            for (int k = klo; k < j; ++k) {
                Mat2 Ljk = (j == i) ? row[size_t(k - lo)] : getL(j, k, i - 1);
                s = s - row[size_t(k - lo)] * Ljk.herm();
            }
            if (j < i) {
                Mat2 Ljj = getL(j, j, i - 1);
                row[size_t(j - lo)] = solve_upper_right(s, Ljj.herm());
            } else {
                row[size_t(j - lo)] = chol2(s);
            }
        }
        rows.push_back(std::move(row));
        if (int(rows.size()) > bw + 2) rows.pop_front();

        if (i >= std::max(min_rows, bw + 1)) {
            extract.assign(size_t(bw + 1), Mat2{});
            for (int k = 0; k <= bw && k <= i; ++k) extract[size_t(k)] = getL(i, i - k, i);
            if (!prev_extract.empty()) {
                double d = 0.0;
                for (int k = 0; k <= bw; ++k)
                    d = std::max(d, (extract[size_t(k)] - prev_extract[size_t(k)]).max_abs());
                row_res = d;
                if (d < opt.factor_tol) { ++i; break; }
            }
            prev_extract = extract;
        }
    }
    if (extract.empty() || row_res > std::sqrt(opt.factor_tol))
        throw std::runtime_error("iwasawa: Bauer iteration did not converge");

    // B_k = (last row, k blocks left of the diagonal)^H
    IwasawaResult res;
    res.rows_used = i;
    res.row_residual = row_res;
    res.dropped_tail = 0.0;
    LoopMatrix B(N, rho);
    for (int k = 0; k <= bw; ++k) {
        Mat2 Bk = extract[size_t(k)].herm();
        if (k <= N) {
            B.a.set(k, Bk.a);
            B.b.set(k, Bk.b);
            B.c.set(k, Bk.c);
            B.d.set(k, Bk.d);
        } else {
            res.dropped_tail += Bk.max_abs() * std::pow(rho, k);
        }
    }
    res.B = B;

    // F = Phi B^{-1} sample-wise
    SampledMatrix sphi = sample(phi, g), sB = sample(B, g);
    SampledMatrix sF(sphi.size());
    for (size_t m = 0; m < sphi.size(); ++m) sF[m] = sphi[m] * sB[m].inv();
    res.F = coefficients(sF, g);
    return res;
}

double unitarity_defect(const LoopMatrix& F, const CircleGrid& g) {
    SampledMatrix s = sample(F, g);
    double worst = 0.0;
    for (const auto& m : s) worst = std::max(worst, (m.herm() * m - Mat2::id()).max_abs());
    return worst;
}

LoopMatrix log_loop(const LoopMatrix& m, const CircleGrid& g) {
    SampledMatrix s = sample(m, g);
    SampledMatrix out(s.size());
    for (size_t i = 0; i < s.size(); ++i) out[i] = mat_log(s[i]);
    // guard against branch jumps between neighbouring samples
    for (size_t i = 1; i + 1 < out.size(); ++i) {
        if ((out[i] - out[i - 1]).max_abs() > 3.0)
            throw std::runtime_error("log_loop: branch discontinuity between samples");
    }
    return coefficients(out, g);
}

LoopMatrix exp_loop(const LoopMatrix& m, const CircleGrid& g) {
    SampledMatrix s = sample(m, g);
    for (auto& x : s) x = mat_exp(x);
    return coefficients(s, g);
}

LoopMatrix dual_conj(const LoopMatrix& m) {
    int N = m.a.degree();
    double rho = m.a.rho();
    LoopMatrix out(N, rho);
    out.a = m.d;
    out.d = m.a;
    // b' = lambda^{-1} c, c' = lambda b  (shift modes, drop overflow)
    for (int i = -N; i <= N; ++i) {
        if (i - 1 >= -N) out.b.set(i - 1, m.c.get(i));
        if (i + 1 <= N) out.c.set(i + 1, m.b.get(i));
    }
    return out;
}

Mat2 dual_conj(const Mat2& m, cplx lambda) {
    return {m.d, m.c / lambda, m.b * lambda, m.a};
}

}  // namespace dpw
