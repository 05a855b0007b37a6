#pragma once
// Closed-form model data on the sphere charts: the frames Phi^S / Phi^C with
// their unitary/positive factors, the model potentials, the su(2)-vector
// closed forms (immersion, Gauss maps, inverse stereographic projection), and
// the gauge action for gauges of the shape z^c H(z) with H rational.

#include "dpw/rational.hpp"

namespace dpw {

// [[0, 1/lambda],[lambda, 0]]
Mat2 s_matrix(cplx lambda);

// (1/(2 sqrt z)) [[z+1, (z-1)/lambda],[lambda(z-1), z+1]], principal sqrt
Mat2 phi_S(cplx z, cplx lambda);
// lambda-independent companion frame, same shape without the lambda factors
Mat2 phi_C(cplx z);
// on the unit circle: Phi^S(e^{i theta}) = exp(i (theta/2) S_lambda) where
// theta is the angle accumulated along the path from z=1 (not reduced mod 2pi)
Mat2 phi_S_circle(double theta, cplx lambda);
Mat2 phi_C_circle(double theta);

// Iwasawa factors of Phi^S
Mat2 F_S(cplx z, cplx lambda);
Mat2 B_S(cplx z, cplx lambda);

// regularizing gauge: [[f,0],[lambda g, 1/f]] with f=(1+z)/sqrt z and, in the
// standard case, g=(1-z)/sqrt z
Mat2 G_S(cplx z, cplx lambda);

// closed-form immersion of the model sphere and the Gauss maps
Vec3 f_S(cplx z);
Vec3 N_S(cplx z);
Vec3 N_C(cplx z);
// rigid motion x -> (1 - x3, -x2, -x1); involutive isometry
Vec3 psi_motion(const Vec3& v);
// inverse stereographic projection (2 Re z, 2 Im z, |z|^2 - 1)/(1 + |z|^2)
Vec3 inv_stereo(cplx z);

// Phi^S(z) M Phi^S(z)^{-1}: the sqrt factors cancel, leaving the rational
// expression A(z) M adj(A(z)) / (4z); likewise its z-derivative
Mat2 phi_S_sandwich(cplx z, cplx lambda, const Mat2& m);
Mat2 phi_S_sandwich_dz(cplx z, cplx lambda, const Mat2& m);

// exact degree-1 coefficient loops for the closed forms
LoopMatrix phi_S_loop(cplx z, int N, double rho);
LoopMatrix F_S_loop(cplx z, int N, double rho);
LoopMatrix B_S_loop(cplx z, int N, double rho);

// model potentials at one lambda sample (coefficient of dz/z at the origin)
RationalForm xi_S(cplx lambda);
RationalForm xi_C();
// [[0, r/lambda + s],[r lambda + s, 0]] dz/z with r + s = 1/2
RationalForm delaunay_xi(double r, double s, cplx lambda);

// entry-swap duality [[a,b],[c,d]] -> [[d, c/lambda],[lambda b, a]] applied to
// every coefficient of the form
RationalForm dual_form(const RationalForm& f, cplx lambda);

// rational parts of the regularizing gauges, G = z^{-1/2} H(z):
// vertex chart  H = [[1+z, 0],[lambda(x(1-z)+iy(1+z)), z/(1+z)]]
// edge chart    H = [[w/(1+w), x(1-w)+iy(1+w)],[0, 1+w]]
RatMat gauge_vertex_rational(cplx lambda, cplx x, cplx y);
RatMat gauge_edge_rational(cplx x, cplx y);

// gauge action for G(z) = z^c H(z):
//   xi.G = H^{-1} xi H + H^{-1} H' dz + (c/z) I dz
// evaluated pointwise; xi_val is the dz-coefficient of the form at z
Mat2 gauge_pointwise(const Mat2& xi_val, const RatMat& h, const RatMat& hinv,
                     const RatMat& hprime, double c, cplx z);

// symbolic version for rational xi (dz-coefficient as a RatMat);
// returns the decomposition into pole terms
RationalForm gauge_rational(const RatMat& xi, const RatMat& h, const RatMat& hinv,
                            const RatMat& hprime, double c);

}  // namespace dpw
