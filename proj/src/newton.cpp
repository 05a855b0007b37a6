#include "dpw/newton.hpp"

#include "dpw/errors.hpp"

#include <Eigen/LU>

#include <cstdio>

namespace dpw {

Eigen::MatrixXd fd_jacobian(const ResidualFn& F, const Eigen::VectorXd& x, double h,
                            const Eigen::VectorXd* Fx) {
    Eigen::VectorXd F0 = Fx ? *Fx : F(x);
    Eigen::MatrixXd J(F0.size(), x.size());
    Eigen::VectorXd xp = x;
    for (long i = 0; i < x.size(); ++i) {
        xp(i) = x(i) + h;
        J.col(i) = (F(xp) - F0) / h;
        xp(i) = x(i);
    }
    return J;
}

NewtonResult newton_solve(const ResidualFn& F, Eigen::VectorXd x, const NewtonOptions& opt,
                          JacobianCache* cache) {
    Eigen::VectorXd Fx = F(x);
    double r = Fx.lpNorm<Eigen::Infinity>();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    bool have = false, fresh = false;
    if (cache && cache->valid && cache->J.cols() == x.size() && cache->J.rows() == Fx.size()) {
        lu.compute(cache->J);
        have = true;  // fresh stays false so a stall still forces a recompute
    }
    int it = 0;
    for (; it < opt.max_iter; ++it) {
        if (r <= opt.tol) return {x, r, it, true};
        if (!have) {
            Eigen::MatrixXd J = fd_jacobian(F, x, opt.fd_h, &Fx);
            if (cache) {
                cache->J = J;
                cache->valid = true;
            }
            lu.compute(J);
            have = true;
            fresh = true;
        }
        Eigen::VectorXd dx = lu.solve(-Fx);
        if (!dx.allFinite()) {
            if (opt.throw_on_fail) throw MaxIterationsError("newton: singular Jacobian");
            return {x, r, it, false};
        }
        double lam = 1.0;
        bool ok = false;
        for (int bt = 0; bt <= opt.max_backtrack; ++bt) {
            Eigen::VectorXd xn = x + lam * dx;
            Eigen::VectorXd Fn = F(xn);
            double rn = Fn.lpNorm<Eigen::Infinity>();
            if (rn < r || rn <= opt.tol) {
                x = std::move(xn);
                Fx = std::move(Fn);
                r = rn;
                ok = true;
                if (lam < 1.0) have = fresh = false;  // stale direction: refresh next time
                else fresh = false;
                break;
            }
            lam *= 0.5;
        }
        if (!ok) {
            if (!fresh) {
                have = false;  // retry with a fresh Jacobian at the current point
                continue;
            }
            if (opt.throw_on_fail) throw MaxIterationsError("newton: line search stalled");
            return {x, r, it, false};
        }
    }
    if (r <= opt.tol) return {x, r, it, true};
    if (opt.throw_on_fail) throw MaxIterationsError("newton: iteration budget exhausted");
    return {x, r, it, false};
}

InnerResult solve_inner(const WeightedGraph& g, double t, const CircleGrid& grid,
                        const Params& x0, const NewtonOptions& nopt,
                        const ResidualOptions& ropt, JacobianCache* cache) {
    ResidualFn F = [&](const Eigen::VectorXd& v) {
        Params x = unpack_params(v, x0, g);
        Assembled A = assemble(g, x, t, grid);
        return compute_residuals(A, ropt).E;
    };
    NewtonResult nr = newton_solve(F, pack_params(x0, g), nopt, cache);
    InnerResult out;
    out.x = unpack_params(nr.x, x0, g);
    Assembled A = assemble(g, out.x, t, grid);
    out.rep = compute_residuals(A, ropt);
    out.resid = nr.resid;
    out.iters = nr.iters;
    out.converged = nr.converged;
    return out;
}

WeightedGraph outer_step(const WeightedGraph& g, const ResidualReport& rep, double scale) {
    DeformTargets tg;
    std::map<int, cplx> f = g.forces();
    for (const auto& [j, R] : rep.r_vertex)
        tg.forces[j] = f.at(j) - 2.0 * std::conj(R) * scale;
    for (const auto& [key, L] : rep.ell_res) {
        for (const GraphEdge& e : g.edges)
            if (e.a == key.first && e.b == key.second)
                tg.lengths[key] = g.edge_length(e) + 2.0 * L * scale;
    }
    return deform(g, tg);
}

SolveResult solve_surface(const WeightedGraph& g0, double t, const SolveOptions& opt,
                          const Params* warm) {
    CircleGrid grid(opt.N, opt.rho);
    SolveResult out;
    out.g = g0;
    out.t = t;
    Params x = central_params(out.g, opt.N, opt.rho);
    if (warm) x = unpack_params(pack_params(*warm, out.g), x, out.g);
    JacobianCache cache;  // shared across outer corrections: the graph moves little
    for (int outer = 0;; ++outer) {
        InnerResult ir = solve_inner(out.g, t, grid, x, opt.newton, opt.residual, &cache);
        out.x = ir.x;
        out.rep = std::move(ir.rep);
        out.inner_iters = ir.iters;
        out.outer_done = outer;
        double defect = 0.0;
        for (const auto& [j, R] : out.rep.r_vertex) defect = std::max(defect, std::abs(R));
        for (const auto& [k, L] : out.rep.ell_res) defect = std::max(defect, std::abs(L));
        {
            char line[160];
            std::snprintf(line, sizeof line,
                          "outer %d: inner %d iters, |E|_inf %.3e, graph defect %.3e", outer,
                          ir.iters, out.rep.E.lpNorm<Eigen::Infinity>(), defect);
            out.log.emplace_back(line);
        }
        if (outer >= opt.outer_iters) break;
        if (defect <= opt.outer_tol) break;
        out.g = outer_step(out.g, out.rep);
        // Keep the solved free parameters; re-seed only the fixed slots
        // (neck radii, base angles) from the deformed graph's central values.
        x = unpack_params(pack_params(out.x, out.g), central_params(out.g, opt.N, opt.rho),
                          out.g);
    }
    return out;
}

}  // namespace dpw
