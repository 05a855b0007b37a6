#pragma once

#include "dpw/plumbing.hpp"

#include <map>
#include <vector>

namespace dpw {

// Integration paths on the noded Riemann surface.  Each segment lives in a
// single chart so the transport knows which form family to evaluate.
//
// Segment kinds:
//   Line      z(s) = a + s (b - a)
//   Arc       z(s) = center + rad * exp(i (th0 + s (th1 - th0)))
//   NodeReal  z(s) = node_coord_inv(p)(x(s)) with x geometric from x0 to x1;
//             traces the spiral between the two node annuli while staying on
//             the unit circle of the chart.
//   NodeRay   node coordinate zeta(s) = dir * x(s), x geometric from x0 to x1
//             (both positive); radial descent into a neck at a fixed angle.
//   NodeArc   node coordinate zeta(s) = rad * exp(i(th0 + s(th1-th0))); a
//             sweep around a neck at fixed |zeta|.
struct PathSeg {
    enum Kind { Line, Arc, NodeReal, NodeRay, NodeArc };

    ChartId chart;
    Kind kind = Line;
    cplx a, b;                           // Line
    cplx center;                         // Arc
    double rad = 1.0, th0 = 0.0, th1 = 0.0;
    cplx p;                              // Node*: node location in chart
    double x0 = 0.0, x1 = 0.0;           // NodeReal/NodeRay endpoints
    cplx dir{1.0};                       // NodeRay direction (unit modulus)

    cplx point(double s) const;
    cplx velocity(double s) const;       // dz/ds
    double rough_length() const;         // crude arclength bound for step sizing

    static PathSeg line(ChartId c, cplx a, cplx b);
    static PathSeg arc(ChartId c, cplx center, double rad, double th0, double th1);
    static PathSeg node_real(ChartId c, cplx p, double x0, double x1);
    static PathSeg node_ray(ChartId c, cplx p, cplx dir, double x0, double x1);
    static PathSeg node_arc(ChartId c, cplx p, double rad, double th0, double th1);
};

using Path = std::vector<PathSeg>;

PathSeg seg_reverse(const PathSeg& s);
Path path_reverse(const Path& p);
Path path_concat(const Path& p, const Path& q);

// Keys for attachment items at a vertex: edges use {j, neighbour}; the i-th
// ray at vertex j uses {j, -1-i}.
OKey ray_key(int vertex, int ray_index);
bool is_ray_item(const OKey& k);
int ray_item_index(const OKey& k);

// Homotopy bookkeeping for the monodromy problem.  At each vertex the
// attachment points (edge ends and ray points) are ordered by the angle of
// their direction in (0, 2pi).  For each item the loop delta encloses that
// item and all earlier ones; delta_prime is the delta of the predecessor
// (empty for the first item, meaning the identity).  The node loop gamma is
// recovered as P(delta_prime)^{-1} P(delta).  For each edge, beta crosses
// both necks of the edge and Gamma = alpha_jk . beta . alpha_rev closes up
// through the neighbouring vertex.
struct PathSet {
    double Rout = 1.25;                       // outer radius of delta rectangles
    std::map<int, std::vector<OKey>> order;   // items per vertex, sorted by angle
    std::map<OKey, double> ang;               // attachment angle, in (0, 2pi)
    std::map<OKey, Path> delta;               // closed loop based at 1 in chart j
    std::map<OKey, Path> delta_prime;         // loop of predecessor (may be empty)
    std::map<OKey, Path> alpha;               // 1_j -> parking point e^{i eps} u
    std::map<OKey, Path> beta;                // canonical edges only
    std::map<OKey, Path> big_gamma;           // canonical edges: alpha beta alpha_rev

    const Path& delta_of(const OKey& item) const { return delta.at(item); }
    const Path& delta_prime_of(const OKey& item) const { return delta_prime.at(item); }
};

// Builds every path of the atlas.  Throws DegenerateError when attachment
// directions at some vertex are too close for the loops to separate them
// (angular gap below eps + 2*atan(eps'/2) + margin).
PathSet build_paths(const PlumbingAtlas& at);

} // namespace dpw
