#pragma once

#include "dpw/residuals.hpp"

#include <functional>

namespace dpw {

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct NewtonOptions {
    double tol = 1e-9;       // max-norm of the residual
    int max_iter = 30;
    double fd_h = 1e-6;
    int max_backtrack = 10;
    bool throw_on_fail = true;
};

struct NewtonResult {
    Eigen::VectorXd x;
    double resid = 0.0;
    int iters = 0;
    bool converged = false;
};

Eigen::MatrixXd fd_jacobian(const ResidualFn& F, const Eigen::VectorXd& x, double h,
                            const Eigen::VectorXd* Fx = nullptr);

// Optional carrier for the finite-difference Jacobian so that a sequence of
// closely related solves (outer corrections, continuation in t) can reuse it.
struct JacobianCache {
    Eigen::MatrixXd J;
    bool valid = false;
};

// Damped quasi-Newton: the finite-difference Jacobian is frozen and only
// refreshed when the backtracking line search stalls.  With a cache the
// initial Jacobian is taken from it when present, and any Jacobian computed
// during the solve is stored back.
NewtonResult newton_solve(const ResidualFn& F, Eigen::VectorXd x0,
                          const NewtonOptions& opt = {},
                          JacobianCache* cache = nullptr);

struct InnerResult {
    Params x;
    ResidualReport rep;
    double resid = 0.0;
    int iters = 0;
    bool converged = false;
};

// Solve the square inner problem at fixed t and graph.  The packed unknowns
// start from x0 (fixed parts stay at their x0 values).
InnerResult solve_inner(const WeightedGraph& g, double t, const CircleGrid& grid,
                        const Params& x0, const NewtonOptions& nopt = {},
                        const ResidualOptions& ropt = {},
                        JacobianCache* cache = nullptr);

// One outer correction: deform the graph to cancel the regularity defects,
// targeting F_j - 2 conj(R_j) and ell_e + 2 L_e.
WeightedGraph outer_step(const WeightedGraph& g, const ResidualReport& rep,
                         double scale = 1.0);

struct SolveOptions {
    int N = 16;
    double rho = 1.2;
    NewtonOptions newton;
    ResidualOptions residual;
    // Alternate inner solves with graph corrections until the vertex
    // regularity residuals R_j and the length residuals L_e drop below
    // outer_tol.  Set outer_iters = 0 to solve on the fixed graph only.
    int outer_iters = 16;
    double outer_tol = 1e-8;
};

struct SolveResult {
    WeightedGraph g;
    Params x;
    double t = 0.0;
    ResidualReport rep;
    int inner_iters = 0;
    int outer_done = 0;
    std::vector<std::string> log;  // one line per outer pass
};

// Full solve: inner Newton plus outer graph corrections.  When warm is given
// its free parameters seed the first inner solve (useful for continuation in
// t); otherwise the solve starts from the central parameters of g.
SolveResult solve_surface(const WeightedGraph& g, double t, const SolveOptions& opt = {},
                          const Params* warm = nullptr);

}  // namespace dpw
