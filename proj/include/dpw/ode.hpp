#pragma once

#include "dpw/assemble.hpp"
#include "dpw/paths.hpp"

namespace dpw {

// Adaptive Dormand-Prince 5(4) transport of the linear system
//     dY/ds = Y * xi(z(s)) * z'(s)
// solved simultaneously for every lambda sample of the grid (shared step,
// error controlled by the worst sample).
struct OdeOptions {
    double tol = 1e-11;      // mixed absolute/relative per-sample tolerance
    double hmin = 1e-12;
    long max_steps = 4000000;
    int init_div = 64;       // initial step = 1/init_div of a segment
};

// Transport along a path through the charts of an assembled potential,
// starting from the identity (or a given initial frame).
SampledMatrix transport(const Assembled& A, const Path& path, const OdeOptions& opt = {});
SampledMatrix transport(const Assembled& A, const Path& path, SampledMatrix Y,
                        const OdeOptions& opt = {});

// Raw single-chart version: the per-sample forms are given directly.
SampledMatrix transport_forms(const std::vector<RationalForm>& forms,
                              const CircleGrid& grid, const PathSeg& seg,
                              SampledMatrix Y, const OdeOptions& opt = {});

// Transport along one segment recording the frame at the given increasing
// parameter values in [0,1]; result[i] is the transport restricted to
// [0, svals[i]] applied to Y.
std::vector<SampledMatrix> transport_points(const Assembled& A, const PathSeg& seg,
                                            const std::vector<double>& svals,
                                            SampledMatrix Y, const OdeOptions& opt = {});

}  // namespace dpw
