#pragma once
// Loop-group Iwasawa factorization Phi = F.B with F unitary on the circle and
// B analytic in the disk, B(0) upper triangular with positive diagonal.
//
// Method: on |lambda|=1 the Gram loop M = Phi^H Phi is positive definite, and
// B is its right spectral factor, M = B^H B.  The block-Toeplitz matrix with
// symbol M is factored by streaming banded block Cholesky; the bottom rows of
// the factor converge geometrically to the coefficients of B (Bauer's method).

#include "dpw/loopmatrix.hpp"

namespace dpw {

struct IwasawaOptions {
    int min_rows = 0;           // 0: use 4N
    int max_rows = 8192;
    double factor_tol = 1e-10;  // successive-row convergence threshold
};

struct IwasawaResult {
    LoopMatrix F;          // unitary factor, degree N
    LoopMatrix B;          // positive factor, degree N
    double dropped_tail;   // weighted norm of B-modes beyond N
    int rows_used;         // Toeplitz block rows consumed
    double row_residual;   // final successive-row difference
};

IwasawaResult iwasawa(const LoopMatrix& phi, const CircleGrid& g,
                      const IwasawaOptions& opt = {});

// max over samples of || F(lambda)^H F(lambda) - I ||
double unitarity_defect(const LoopMatrix& F, const CircleGrid& g);

// sample-wise principal matrix log / exp with coefficient reconstruction.
// log_loop refuses inputs whose samples jump branches between neighbours.
LoopMatrix log_loop(const LoopMatrix& m, const CircleGrid& g);
LoopMatrix exp_loop(const LoopMatrix& m, const CircleGrid& g);

// conjugation by K = [[0, i lambda^{-1/2}], [i lambda^{1/2}, 0]]:
// [[a,b],[c,d]] -> [[d, c/lambda],[b lambda, a]].  The half-integer powers
// cancel, so this is an honest loop operation.
LoopMatrix dual_conj(const LoopMatrix& m);
Mat2 dual_conj(const Mat2& m, cplx lambda);

}  // namespace dpw
