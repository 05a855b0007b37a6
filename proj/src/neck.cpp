#include "dpw/neck.hpp"

#include <cmath>
#include <complex>

namespace dpw {

NeckModel::NeckModel() {
    b = Mat2{0.0, 0.0, 1.0, 0.0};
    c = Mat2{0.0, 1.0, 0.0, 0.0};
}

Mat2 neck_F0(const NeckModel& m) {
    return mat_exp(-m.eps_prime * m.b) * mat_exp(-m.eps_prime * m.c);
}

namespace {

// One RK4 sweep of dY = Y * xi(z(s)) z'(s)/... expressed as dY/ds = Y * A(s),
// with A(s) = (b z(s) + c t / z(s)) * dlog(s) where dlog = d(log z)/ds.
template <typename ZofS, typename DlogOfS>
Mat2 rk4_transport(const NeckModel& m, double t, int n, ZofS zof, DlogOfS dlog) {
    Mat2 Y = Mat2::id();
    auto rhs = [&](double s, const Mat2& y) -> Mat2 {
        cplx z = zof(s);
        return y * ((m.b * z + m.c * (t / z)) * dlog(s));
    };
    double h = 1.0 / n;
    for (int i = 0; i < n; ++i) {
        double s = i * h;
        Mat2 k1 = rhs(s, Y);
        Mat2 k2 = rhs(s + 0.5 * h, Y + 0.5 * h * k1);
        Mat2 k3 = rhs(s + 0.5 * h, Y + 0.5 * h * k2);
        Mat2 k4 = rhs(s + h, Y + h * k3);
        Y = Y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return Y;
}

} // namespace

Mat2 neck_F(const NeckModel& m, double t, int n) {
    const double ep = m.eps_prime;
    // Monodromy around |z| = eps' based at z = eps', counterclockwise.
    Mat2 Pg = rk4_transport(
        m, t, n, [&](double s) { return ep * std::exp(cplx(0.0, 2.0 * M_PI * s)); },
        [&](double) { return cplx(0.0, 2.0 * M_PI); });
    // Transport along beta_t(s) = eps'^(1-2s) t^s from eps' to t/eps'.
    double dl = std::log(t) - 2.0 * std::log(ep);
    Mat2 Pb = rk4_transport(
        m, t, n,
        [&](double s) { return std::pow(ep, 1.0 - 2.0 * s) * std::pow(t, s); },
        [&](double) { return cplx(dl, 0.0); });
    cplx a = cplx(0.0, std::log(t) / (2.0 * M_PI));  // -log t / (2 pi i)
    return mat_pow(Pg, a) * Pb;
}

NeckScan neck_scan(const NeckModel& m, double tmin, double tmax, int steps,
                   int n, double floor_dist) {
    NeckScan out;
    Mat2 F0 = neck_F0(m);
    for (int i = 0; i < steps; ++i) {
        double s = (steps == 1) ? 0.0 : double(i) / (steps - 1);
        double t = tmin * std::pow(tmax / tmin, s);
        out.t.push_back(t);
        out.dist.push_back((neck_F(m, t, n) - F0).norm());
    }
    // Least-squares slope of log dist against log t over usable points.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int np = 0;
    for (size_t i = 0; i < out.t.size(); ++i) {
        if (out.dist[i] < floor_dist) continue;
        double x = std::log(out.t[i]), y = std::log(out.dist[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++np;
    }
    if (np >= 2) out.exponent = (np * sxy - sx * sy) / (np * sxx - sx * sx);
    return out;
}

} // namespace dpw
