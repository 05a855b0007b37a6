#pragma once
// Model problem for the principal solution across a degenerating annulus.
//
// The family of forms  xi_t = (b z + c t / z) dz / z  on the annulus
// t/eps' <= |z| <= eps'  degenerates as t -> 0 into two half-necks.  The
// combination
//     F(t) = P(gamma)^(-log t / 2 pi i) * P(beta_t)
// (monodromy around |z| = eps', then transport along the geometric path
// beta_t(s) = eps'^(1-2s) t^s from eps' to t/eps') extends continuously to
// t = 0 with limit
//     F(0) = exp(-eps' b) * exp(-eps' c),
// the product of the two limiting half-neck transports.  neck_scan measures
// the rate ||F(t) - F(0)|| ~ C t^alpha.

#include "dpw/loopmatrix.hpp"

#include <vector>

namespace dpw {

struct NeckModel {
    Mat2 b;               // coefficient of the z dz/z part
    Mat2 c;               // coefficient of the t/z dz/z part
    double eps_prime = 0.25;
    NeckModel();          // default: b lower nilpotent, c upper nilpotent
};

// Limit value F(0) = exp(-eps' b) exp(-eps' c).
Mat2 neck_F0(const NeckModel& m);

// F(t) for t > 0, via fixed-step RK4 transport with n steps per path.
Mat2 neck_F(const NeckModel& m, double t, int n = 4000);

struct NeckScan {
    std::vector<double> t;
    std::vector<double> dist;   // ||F(t) - F(0)||
    double exponent = 0.0;      // least-squares slope of log dist vs log t
};

// Evaluate F(t) on a log-spaced grid of `steps` values in [tmin, tmax] and
// fit the decay exponent.  Distances below `floor_dist` are excluded from
// the fit (already at roundoff).
NeckScan neck_scan(const NeckModel& m, double tmin, double tmax, int steps,
                   int n = 4000, double floor_dist = 1e-14);

} // namespace dpw
