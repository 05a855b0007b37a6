#include "dpw/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpw {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187,
                 A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = B1 - 5179.0 / 57600, E3 = B3 - 7571.0 / 16695,
                 E4 = B4 - 393.0 / 640, E5 = B5 + 92097.0 / 339200,
                 E6 = B6 - 187.0 / 2100, E7 = -1.0 / 40;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;

struct Stepper {
    const std::vector<RationalForm>& forms;
    const PathSeg& seg;
    size_t S;
    SampledMatrix k1, k2, k3, k4, k5, k6, k7, tmp;

    Stepper(const std::vector<RationalForm>& f, const PathSeg& sg)
        : forms(f), seg(sg), S(f.size()),
          k1(S), k2(S), k3(S), k4(S), k5(S), k6(S), k7(S), tmp(S) {}

    void rhs(double s, const SampledMatrix& Y, SampledMatrix& K) const {
        cplx z = seg.point(s), v = seg.velocity(s);
        for (size_t m = 0; m < S; ++m) K[m] = Y[m] * (forms[m].eval(z) * v);
    }

    // one attempted step; returns the scaled error (accept when <= 1)
    double attempt(double s, double h, const SampledMatrix& Y, SampledMatrix& Ynew,
                   double tol) {
        for (size_t m = 0; m < S; ++m) tmp[m] = Y[m] + k1[m] * (h * A21);
        rhs(s + C2 * h, tmp, k2);
        for (size_t m = 0; m < S; ++m)
            tmp[m] = Y[m] + k1[m] * (h * A31) + k2[m] * (h * A32);
        rhs(s + C3 * h, tmp, k3);
        for (size_t m = 0; m < S; ++m)
            tmp[m] = Y[m] + k1[m] * (h * A41) + k2[m] * (h * A42) + k3[m] * (h * A43);
        rhs(s + C4 * h, tmp, k4);
        for (size_t m = 0; m < S; ++m)
            tmp[m] = Y[m] + k1[m] * (h * A51) + k2[m] * (h * A52) + k3[m] * (h * A53) +
                     k4[m] * (h * A54);
        rhs(s + C5 * h, tmp, k5);
        for (size_t m = 0; m < S; ++m)
            tmp[m] = Y[m] + k1[m] * (h * A61) + k2[m] * (h * A62) + k3[m] * (h * A63) +
                     k4[m] * (h * A64) + k5[m] * (h * A65);
        rhs(s + h, tmp, k6);
        for (size_t m = 0; m < S; ++m)
            Ynew[m] = Y[m] + k1[m] * (h * B1) + k3[m] * (h * B3) + k4[m] * (h * B4) +
                      k5[m] * (h * B5) + k6[m] * (h * B6);
        rhs(s + h, Ynew, k7);
        double err = 0.0;
        for (size_t m = 0; m < S; ++m) {
            Mat2 d = k1[m] * (h * E1) + k3[m] * (h * E3) + k4[m] * (h * E4) +
                     k5[m] * (h * E5) + k6[m] * (h * E6) + k7[m] * (h * E7);
            err = std::max(err, d.norm() / (tol * (1.0 + Y[m].norm())));
        }
        return err;
    }
};

// integrate one segment from s=0, pausing exactly at each value in stops
// (strictly increasing, last one 1.0); on_stop is called at each pause
template <class F>
void run_segment(const std::vector<RationalForm>& forms, const PathSeg& seg,
                 SampledMatrix& Y, const OdeOptions& opt, const std::vector<double>& stops,
                 F&& on_stop) {
    Stepper st(forms, seg);
    SampledMatrix Ynew(st.S);
    double s = 0.0;
    double h = 1.0 / opt.init_div;
    long steps = 0;
    st.rhs(0.0, Y, st.k1);
    for (double stop : stops) {
        while (s < stop - 1e-15) {
            double hc = std::min(h, stop - s);
            double err = st.attempt(s, hc, Y, Ynew, opt.tol);
            if (++steps > opt.max_steps)
                throw std::runtime_error("ode: step budget exhausted");
            if (err <= 1.0) {
                s += hc;
                std::swap(Y, Ynew);
                std::swap(st.k1, st.k7);
                double grow = (err == 0.0) ? 5.0 : 0.9 * std::pow(err, -0.2);
                h = hc * std::clamp(grow, 0.2, 5.0);
            } else {
                h = hc * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
                if (h < opt.hmin) throw std::runtime_error("ode: step size underflow");
            }
        }
        s = stop;
        on_stop(Y);
        // k1 is still valid: the frame is continuous through a pause
    }
}

}  // namespace

SampledMatrix transport_forms(const std::vector<RationalForm>& forms,
                              const CircleGrid& grid, const PathSeg& seg,
                              SampledMatrix Y, const OdeOptions& opt) {
    if (forms.size() != size_t(grid.total()) || Y.size() != forms.size())
        throw std::invalid_argument("transport_forms: size mismatch");
    run_segment(forms, seg, Y, opt, {1.0}, [](const SampledMatrix&) {});
    return Y;
}

SampledMatrix transport(const Assembled& A, const Path& path, const OdeOptions& opt) {
    return transport(A, path, sm_identity(A.grid), opt);
}

SampledMatrix transport(const Assembled& A, const Path& path, SampledMatrix Y,
                        const OdeOptions& opt) {
    for (const PathSeg& seg : path) {
        const auto& forms = A.chart_forms(seg.chart);
        run_segment(forms, seg, Y, opt, {1.0}, [](const SampledMatrix&) {});
    }
    return Y;
}

std::vector<SampledMatrix> transport_points(const Assembled& A, const PathSeg& seg,
                                            const std::vector<double>& svals,
                                            SampledMatrix Y, const OdeOptions& opt) {
    std::vector<double> stops = svals;
    if (stops.empty()) return {};
    for (size_t i = 0; i + 1 < stops.size(); ++i)
        if (stops[i + 1] <= stops[i])
            throw std::invalid_argument("transport_points: stops must increase");
    std::vector<SampledMatrix> out;
    out.reserve(stops.size());
    const auto& forms = A.chart_forms(seg.chart);
    run_segment(forms, seg, Y, opt, stops, [&out](const SampledMatrix& Yc) { out.push_back(Yc); });
    return out;
}

}  // namespace dpw
