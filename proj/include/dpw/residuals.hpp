#pragma once

#include "dpw/assemble.hpp"
#include "dpw/ode.hpp"
#include "dpw/paths.hpp"

#include <Eigen/Dense>

namespace dpw {

// The inner residual: per oriented edge the neck monodromy block, per
// canonical edge the cross-neck gluing block and the sphere regularity pair,
// per ray the end monodromy block.  The total length equals param_dim, so the
// inner problem is square.
//
// For t != 0 the monodromies are computed by transporting the frame along the
// homotopy loops; at t = 0 they reduce to residue integrals of the
// t-derivative family conjugated into the frame of the standard sphere, and
// the cross-neck matrix to an explicit product.
struct ResidualOptions {
    OdeOptions ode;
    double rad_edge = 0.3;   // contour radius around a node point (t = 0)
    double rad_ray = 0.2;    // contour radius around a ray point (t = 0)
    int contour_n = 512;
    int iq_n = 512;          // panels for the node-coordinate primitive
};

struct ResidualReport {
    Eigen::VectorXd E;

    // diagnostics, keyed like the blocks they feed
    std::map<OKey, SampledMatrix> mcheck_edge;  // oriented edges
    std::map<int, SampledMatrix> mcheck_ray;    // ray index
    std::map<OKey, SampledMatrix> pmat;         // canonical: cross-neck matrix
    std::map<OKey, SampledMatrix> ptilde;       // canonical: its normalized log
    std::map<OKey, double> ell_res;             // canonical: length residual L
    std::map<int, cplx> r_vertex;               // vertex regularity defect
    std::map<OKey, cplx> r_sphere;              // canonical sphere defect
};

int residual_dim(const WeightedGraph& g, int N);

ResidualReport compute_residuals(const Assembled& A, const ResidualOptions& opt = {});

// Labels matching the entries of ResidualReport::E, for diagnostics.
std::vector<std::string> residual_labels(const WeightedGraph& g, int N);

}  // namespace dpw
