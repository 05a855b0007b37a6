#include "dpw/sym.hpp"

namespace dpw {

SymPoint sym_from_unitary(const LoopMatrix& F) {
    SymPoint out;
    Mat2 U = F.eval(1.0);
    Mat2 dU = F.deriv(1.0);
    Mat2 Ui = U.inv();
    cplx I(0.0, 1.0);
    out.f = vec_from_su2(-2.0 * I * (dU * Ui));
    out.n = vec_from_su2(-I * (U * Mat2::diag(-1.0, 1.0) * Ui));
    out.defect = (U * U.herm() - Mat2::id()).norm();
    return out;
}

SymPoint sym_point(const SampledMatrix& phi, const CircleGrid& g,
                   const IwasawaOptions& opt) {
    LoopMatrix lm = coefficients(phi, g);
    IwasawaResult iw = iwasawa(lm, g, opt);
    SymPoint out = sym_from_unitary(iw.F);
    out.dropped = iw.dropped_tail;
    return out;
}

} // namespace dpw
