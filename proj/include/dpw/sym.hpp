#pragma once
// Recovery of the immersion from a holomorphic frame: factor the frame into
// unitary x positive, then read the surface point and unit normal off the
// lambda-derivative of the unitary part at lambda = 1.

#include "dpw/iwasawa.hpp"

namespace dpw {

struct SymPoint {
    Vec3 f;               // immersion point
    Vec3 n;               // unit normal
    double dropped = 0;   // tail mass dropped while factoring (accuracy hint)
    double defect = 0;    // deviation of the unitary factor from SU(2) at lambda=1
};

// From the unitary factor (a lambda-loop):
//   f = vec(-2i (dF/dlambda) F^{-1})   at lambda = 1
//   n = vec(-i F diag(-1,1) F^{-1})    at lambda = 1
SymPoint sym_from_unitary(const LoopMatrix& F);

// Full pipeline from a frame sampled on the grid circles: reconstruct
// coefficients, factor, and evaluate.
SymPoint sym_point(const SampledMatrix& phi, const CircleGrid& g,
                   const IwasawaOptions& opt = {});

} // namespace dpw
