#pragma once
// Assembly of the family of potentials xi = eta + t chi attached to a graph:
// per lambda-sample rational forms, one per chart.  For t > 0 the form is
// built globally on the base chart from the pure principal parts of every
// prescribed pole (exact on trees) and pulled back to the other charts; at
// t = 0 the charts decouple and the t-derivative family is built as well,
// since the limit residual formulas consume it.

#include "dpw/plumbing.hpp"

namespace dpw {

struct Assembled {
    WeightedGraph g;
    CircleGrid grid;
    double t = 0.0;
    PlumbingAtlas atlas;

    // raw per-sample values of the parameter loops (index = grid slot)
    struct EdgeVals { std::vector<cplx> a, b, c; };
    struct SphereVals { std::vector<cplx> A, B, C, q; };  // B derived, q = i nu
    struct RayVals { std::vector<cplx> a, b, p; };  // a,b carry the (lambda-1)^2 factor
    std::map<OKey, EdgeVals> edge;      // both orientations
    std::map<OKey, SphereVals> sphere;  // canonical keys
    std::map<int, RayVals> ray;
    std::map<int, std::vector<cplx>> Cj;  // dependent vertex entry

    // prescribed residue matrices at one sample
    Mat2 m_mat(const OKey& jk, int s) const;       // [[a, ib/lambda],[ic, -a]]
    Mat2 M_vertex(int j, int s) const;             // [[0, 1/(2 lambda)],[lambda Cj, 0]]
    Mat2 M_sphere(const OKey& jk, int s) const;    // [[iA, B],[C, -iA]], any orientation

    // chart[c][s]: restriction of xi to chart c at sample s (t > 0: pullback
    // of global_form[s]); dt[c][s]: d xi/dt at t = 0 (built only when t == 0)
    std::vector<RationalForm> global_form;
    std::map<ChartId, std::vector<RationalForm>> chart;
    std::map<ChartId, std::vector<RationalForm>> dt;

    const std::vector<RationalForm>& chart_forms(const ChartId& c) const;
};

Assembled assemble(const WeightedGraph& g, const Params& x, double t,
                   const CircleGrid& grid);

// Wiener-real part on samples: (f_m + conj(f_{M-1-m}))/2, bonus slot with itself
std::vector<cplx> real_part_samples(const std::vector<cplx>& f, const CircleGrid& g);

// constant Fourier coefficient from the uniform samples
cplx coeff0(const std::vector<cplx>& f, const CircleGrid& g);

// Regularity defects.  R_j (per vertex): the resonant coefficient of the
// lambda^0 part of the lower-left entry at the vertex center,
//   t^{-1} Res_0( z^{-1}(z+1)^2 gamma^0 );
// R_jk (per canonical edge): same for the upper-right entry at the node pair
// center of the edge sphere, in the coordinate w with z = (w+q)/(1-qw).
// At t = 0 both are evaluated on the dt family (no t division).
std::map<int, cplx> vertex_regularity(const Assembled& A);
std::map<OKey, cplx> sphere_regularity(const Assembled& A);

// Delaunay weight density of a ray: kappa = p lambda xi_12(p) per sample;
// the end weight is 8 pi t kappa(1) ahat(1).
std::vector<cplx> ray_kappa(const Assembled& A, int ray_index);

// Counterclockwise contour integral of the global form around the j-side
// node circle |zeta_jk| = rad, at sample s (t > 0 only).  Equals
// 2 pi i t m_jk when the assembly is consistent.
Mat2 node_period(const Assembled& A, int j, int k, double rad, int s, int n = 1024);

}  // namespace dpw
