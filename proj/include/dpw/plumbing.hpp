#pragma once
// Chart bookkeeping for the family of noded spheres attached to a weighted
// graph: one chart per vertex, one per edge, node coordinates around the
// attachment points, and (when the gluing parameter t is nonzero) the Moebius
// maps identifying every chart with the base vertex chart.  Also defines the
// parameter vector of the construction (loops and scalars attached to edges,
// edge spheres and rays) together with its packing into a flat real vector.

#include <Eigen/Dense>

#include "dpw/graph.hpp"
#include "dpw/rational.hpp"
#include "dpw/wiener.hpp"

namespace dpw {

using OKey = std::pair<int, int>;  // oriented edge (j,k); canonical when j<k

inline OKey canon(OKey e) {
    return e.first < e.second ? e : OKey{e.second, e.first};
}
inline OKey reversed(OKey e) { return {e.second, e.first}; }

// ---------------------------------------------------------------------------
// Charts
struct ChartId {
    int a = 0, b = -1;  // b < 0: vertex chart of a; else edge chart {a,b}, a<b

    static ChartId vertex(int j) { return {j, -1}; }
    static ChartId edge(int j, int k) { return {std::min(j, k), std::max(j, k)}; }
    bool is_vertex() const { return b < 0; }
    bool operator==(const ChartId& o) const { return a == o.a && b == o.b; }
    bool operator<(const ChartId& o) const {
        return a != o.a ? a < o.a : b < o.b;
    }
    std::string name() const;
};

// Coordinate vanishing at the attachment point p (|p| = 1):
//   zeta(z) = -2i (z - p) / (z + p),  inverse  z = p (2 + i zeta)/(2 - i zeta).
// Real zeta corresponds to the unit circle, with arg z increasing in zeta;
// Im zeta < 0 is the outside |z| > 1.
Moebius node_coord(cplx p);
Moebius node_coord_inv(cplx p);

// ---------------------------------------------------------------------------
// Parameters.  Loops live in W_R^{>=0} (real coefficients, modes 0..N).
struct EdgeParams {        // one set per oriented edge (j,k)
    LoopScalar a, b, c;    // node-period data of the perturbation form
    double theta = 0.0;    // attachment angle offset: p_jk = u_jk e^{i theta}
    double r = 0.0;        // gluing rate: t_jk = r t
};

struct SphereParams {      // one per canonical edge {j,k}
    LoopScalar A, C;       // diagonal / lower-left entries of the edge matrix
    LoopScalar nu;         // node pair of the edge sphere: q = i nu
};

struct RayParams {         // one per ray
    LoopScalar ahat, bhat;  // double-pole data: a = (lambda-1)^2 ahat, same for b
    LoopScalar theta;       // attachment angle: p = exp(i theta)
};

struct Params {
    int N = 16;
    double rho = 1.2;
    std::map<OKey, EdgeParams> edge;       // both orientations present
    std::map<OKey, SphereParams> sphere;   // canonical keys only
    std::map<int, RayParams> ray;          // index into graph.rays
};

// Central value: the exact solution of the t=0 problem for graph g.
Params central_params(const WeightedGraph& g, int N, double rho);

// Flat real coordinates of the free parameters.  Held fixed (absent from the
// vector): r_jk for the canonical orientation, the constant coefficient of
// ahat, and the constant coefficient of a ray's theta.
int param_dim(const WeightedGraph& g, int N);
Eigen::VectorXd pack_params(const Params& x, const WeightedGraph& g);
Params unpack_params(const Eigen::VectorXd& v, const Params& ref,
                     const WeightedGraph& g);
std::vector<std::string> param_labels(const WeightedGraph& g, int N);

// ---------------------------------------------------------------------------
// Atlas
struct NodeData {           // oriented edge (j,k): the j-side node
    cplx p;                 // attachment point in the vertex chart, |p| = 1
    double pprime;          // attachment in the edge chart: +1 (j<k) or -1
    double r = 0.0;         // gluing rate
    double t_jk = 0.0;      // r * t
};

struct PlumbingAtlas {
    double t = 0.0;
    double eps = 0.5, eps_prime = 0.25;
    WeightedGraph graph;
    std::vector<ChartId> charts;          // all vertex charts, then edge charts
    std::map<OKey, NodeData> node;        // both orientations
    std::map<ChartId, Moebius> to_global; // chart -> base chart; empty at t=0
    ChartId base;

    const NodeData& node_at(int j, int k) const;
    Moebius global(const ChartId& c) const;
    // vertex chart j -> edge chart {j,k} on the gluing annulus:
    //   z' = zeta'_{jk}^{-1}( t_jk / zeta_jk(z) )
    Moebius vertex_to_edge(int j, int k) const;
    Moebius edge_to_vertex(int j, int k) const;
    // radius (in the node coordinate) of the disk removed on the j side of
    // edge (j,k); points with |zeta_jk| below it are off the surface
    double removed_radius(int j, int k) const;
};

// Requires |t_jk| < eps^2 for every oriented edge and a connected tree graph
// (node periods are only automatically zero on trees); DegenerateError
// otherwise.
PlumbingAtlas build_atlas(const WeightedGraph& g, const Params& x, double t,
                          double eps = 0.5, double eps_prime = 0.25);

}  // namespace dpw
