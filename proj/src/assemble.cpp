#include "dpw/assemble.hpp"

namespace dpw {

static const Mat2 E21{0.0, 0.0, 1.0, 0.0};

Mat2 Assembled::m_mat(const OKey& jk, int s) const {
    const EdgeVals& v = edge.at(jk);
    cplx lam = grid.lambda[size_t(s)];
    cplx i(0.0, 1.0);
    return {v.a[size_t(s)], i * v.b[size_t(s)] / lam,
            i * v.c[size_t(s)], -v.a[size_t(s)]};
}

Mat2 Assembled::M_vertex(int j, int s) const {
    cplx lam = grid.lambda[size_t(s)];
    return {0.0, 0.5 / lam, lam * Cj.at(j)[size_t(s)], 0.0};
}

Mat2 Assembled::M_sphere(const OKey& jk, int s) const {
    const SphereVals& v = sphere.at(canon(jk));
    cplx i(0.0, 1.0);
    return {i * v.A[size_t(s)], v.B[size_t(s)], v.C[size_t(s)], -i * v.A[size_t(s)]};
}

const std::vector<RationalForm>& Assembled::chart_forms(const ChartId& c) const {
    auto it = chart.find(c);
    if (it == chart.end()) throw std::logic_error("chart_forms: unknown chart");
    return it->second;
}

std::vector<cplx> real_part_samples(const std::vector<cplx>& f, const CircleGrid& g) {
    std::vector<cplx> out(f.size());
    for (int m = 0; m < g.M; ++m)
        out[size_t(m)] = 0.5 * (f[size_t(m)] + std::conj(f[size_t(g.M - 1 - m)]));
    out[size_t(g.M)] = 0.5 * (f[size_t(g.M)] + std::conj(f[size_t(g.M)]));
    return out;
}

cplx coeff0(const std::vector<cplx>& f, const CircleGrid& g) {
    cplx s = 0.0;
    for (int m = 0; m < g.M; ++m) s += f[size_t(m)];
    return s / double(g.M);
}

// omega_{p,q} with matrix coefficient, as used by the chi forms
static RationalForm chi_halfpair(cplx p, cplx q, const Mat2& coef) {
    return std_form_halfpair(p, q, -q, coef);
}

Assembled assemble(const WeightedGraph& g, const Params& x, double t,
                   const CircleGrid& grid) {
    Assembled A{g, grid, t, build_atlas(g, x, t)};
    const int S = grid.total();
    cplx I(0.0, 1.0);

    // ---- sample every parameter loop -----------------------------------
    for (const auto& [key, ep] : x.edge) {
        Assembled::EdgeVals v;
        v.a = sample(ep.a, grid);
        v.b = sample(ep.b, grid);
        v.c = sample(ep.c, grid);
        A.edge[key] = std::move(v);
    }
    for (const auto& [key, sp] : x.sphere) {
        Assembled::SphereVals v;
        v.A = sample(sp.A, grid);
        v.C = sample(sp.C, grid);
        auto nu = sample(sp.nu, grid);
        v.q.resize(size_t(S));
        for (int s = 0; s < S; ++s) v.q[size_t(s)] = I * nu[size_t(s)];
        v.B.resize(size_t(S));  // filled below
        A.sphere[key] = std::move(v);
    }
    for (const auto& [idx, rp] : x.ray) {
        Assembled::RayVals v;
        auto ah = sample(rp.ahat, grid);
        auto bh = sample(rp.bhat, grid);
        auto th = sample(rp.theta, grid);
        v.a.resize(size_t(S));
        v.b.resize(size_t(S));
        v.p.resize(size_t(S));
        for (int s = 0; s < S; ++s) {
            cplx w = grid.lambda[size_t(s)] - 1.0;
            v.a[size_t(s)] = w * w * ah[size_t(s)];
            v.b[size_t(s)] = w * w * bh[size_t(s)];
            v.p[size_t(s)] = std::exp(I * th[size_t(s)]);
        }
        A.ray[idx] = std::move(v);
    }

    // ---- dependent entries ---------------------------------------------
    // C_j from the alpha/beta residues at the vertex center
    for (int j : g.vertex_ids()) {
        std::vector<cplx> ra(size_t(S), 0.0), rb(size_t(S), 0.5), val(static_cast<size_t>(S));
        for (int ei : g.incident_edges(j)) {
            int k = g.edges[size_t(ei)].a == j ? g.edges[size_t(ei)].b : g.edges[size_t(ei)].a;
            const auto& e = A.edge.at({j, k});
            for (int s = 0; s < S; ++s) {
                ra[size_t(s)] -= 0.5 * t * e.a[size_t(s)];
                rb[size_t(s)] -= 0.5 * t * I * e.b[size_t(s)];
            }
        }
        for (int s = 0; s < S; ++s)
            val[size_t(s)] = (0.25 - ra[size_t(s)] * ra[size_t(s)]) / rb[size_t(s)];
        A.Cj[j] = real_part_samples(val, grid);
    }
    // B_jk from the alpha/gamma residues at the node pair center
    for (auto& [key, sv] : A.sphere) {
        const auto& ejk = A.edge.at(key);
        const auto& ekj = A.edge.at(reversed(key));
        std::vector<cplx> val(static_cast<size_t>(S));
        for (int s = 0; s < S; ++s) {
            cplx ra = I * sv.A[size_t(s)] + 0.5 * t * (ejk.a[size_t(s)] + ekj.a[size_t(s)]);
            cplx rg = sv.C[size_t(s)] + 0.5 * t * I * (ejk.c[size_t(s)] + ekj.c[size_t(s)]);
            val[size_t(s)] = (0.25 - ra * ra) / rg;
        }
        sv.B = real_part_samples(val, grid);
    }

    // chi residue at the center (and at infinity) of a vertex chart
    auto chi_center_res = [&](int j, int s) {
        Mat2 r{};
        for (int ei : g.incident_edges(j)) {
            int k = g.edges[size_t(ei)].a == j ? g.edges[size_t(ei)].b : g.edges[size_t(ei)].a;
            r = r + A.m_mat({j, k}, s) * (-0.5);
        }
        for (int ri : g.incident_rays(j))
            r = r + E21 * (-0.5 * I * A.ray.at(ri).b[size_t(s)]);
        return r;
    };

    // ---- forms ----------------------------------------------------------
    if (t == 0.0) {
        for (int j : g.vertex_ids()) {
            ChartId cid = ChartId::vertex(j);
            std::vector<RationalForm> fs(static_cast<size_t>(S)), dfs(static_cast<size_t>(S));
            for (int s = 0; s < S; ++s) {
                RationalForm f;
                f.add_simple(0.0, A.M_vertex(j, s));
                fs[size_t(s)] = std::move(f);

                RationalForm df;
                for (int ei : g.incident_edges(j)) {
                    const GraphEdge& e = g.edges[size_t(ei)];
                    int k = e.a == j ? e.b : e.a;
                    const NodeData& nd = A.atlas.node_at(j, k);
                    cplx q = A.sphere.at(canon({j, k})).q[size_t(s)];
                    cplx fac = nd.r * (1.0 + q * q) / (1.0 - q * q) * nd.p;
                    df.add_double(nd.p, A.M_sphere({j, k}, s) * fac);
                    df.add(chi_halfpair(nd.p, 0.0, A.m_mat({j, k}, s)));
                }
                for (int ri : g.incident_rays(j)) {
                    const auto& rv = A.ray.at(ri);
                    cplx p = rv.p[size_t(s)];
                    df.add_double(p, E21 * (rv.a[size_t(s)] * p));
                    df.add(chi_halfpair(p, 0.0, E21 * (I * rv.b[size_t(s)])));
                }
                dfs[size_t(s)] = std::move(df);
            }
            A.chart[cid] = std::move(fs);
            A.dt[cid] = std::move(dfs);
        }
        for (const auto& e : g.edges) {
            ChartId cid = ChartId::edge(e.a, e.b);
            OKey jk{e.a, e.b}, kj{e.b, e.a};
            std::vector<RationalForm> fs(static_cast<size_t>(S)), dfs(static_cast<size_t>(S));
            for (int s = 0; s < S; ++s) {
                cplx q = A.sphere.at(jk).q[size_t(s)];
                RationalForm f = std_form_node(q, -q, A.M_sphere(jk, s));
                fs[size_t(s)] = std::move(f);

                RationalForm df;
                df.add_double(1.0, A.M_vertex(e.a, s) * A.atlas.node_at(e.a, e.b).r);
                df.add_double(-1.0, A.M_vertex(e.b, s) * (-A.atlas.node_at(e.b, e.a).r));
                df.add(chi_halfpair(1.0, q, -A.m_mat(jk, s)));
                df.add(chi_halfpair(-1.0, q, -A.m_mat(kj, s)));
                dfs[size_t(s)] = std::move(df);
            }
            A.chart[cid] = std::move(fs);
            A.dt[cid] = std::move(dfs);
        }
        return A;
    }

    // t > 0: global pure-principal-part assembly, then pull back per chart
    A.global_form.resize(size_t(S));
    for (int s = 0; s < S; ++s) {
        RationalForm G;
        for (int j : g.vertex_ids()) {
            Moebius T = A.atlas.global(ChartId::vertex(j));
            Mat2 rc = chi_center_res(j, s);
            G.add_simple(T(0.0), A.M_vertex(j, s) + rc * t);
            if (!T.maps_infinity_to_infinity())
                G.add_simple(T.image_of_infinity(), rc * t - A.M_vertex(j, s));
            for (int ri : g.incident_rays(j)) {
                const auto& rv = A.ray.at(ri);
                cplx p = rv.p[size_t(s)];
                cplx W = T(p);
                G.add_double(W, E21 * (t * rv.a[size_t(s)] * p * T.deriv(p)));
                G.add_simple(W, E21 * (t * I * rv.b[size_t(s)]));
            }
        }
        for (const auto& e : g.edges) {
            OKey jk{e.a, e.b}, kj{e.b, e.a};
            Moebius T = A.atlas.global(ChartId::edge(e.a, e.b));
            cplx q = A.sphere.at(jk).q[size_t(s)];
            Mat2 half = (A.m_mat(jk, s) + A.m_mat(kj, s)) * (0.5 * t);
            G.add_simple(T(q), A.M_sphere(jk, s) + half);
            cplx sig = std::abs(q) < 1e-13 ? T.image_of_infinity() : T(-1.0 / q);
            G.add_simple(sig, half - A.M_sphere(jk, s));
        }
        A.global_form[size_t(s)] = std::move(G);
    }
    for (const ChartId& c : A.atlas.charts) {
        Moebius T = A.atlas.global(c);
        std::vector<RationalForm> fs(static_cast<size_t>(S));
        for (int s = 0; s < S; ++s) fs[size_t(s)] = A.global_form[size_t(s)].pullback(T);
        A.chart[c] = std::move(fs);
    }
    return A;
}

// ---------------------------------------------------------------------------

std::map<int, cplx> vertex_regularity(const Assembled& A) {
    std::map<int, cplx> out;
    const auto& grid = A.grid;
    for (int j : A.g.vertex_ids()) {
        const auto& fs = A.t > 0.0 ? A.chart.at(ChartId::vertex(j))
                                   : A.dt.at(ChartId::vertex(j));
        std::vector<cplx> combo(size_t(grid.total()));
        for (int s = 0; s < grid.total(); ++s) {
            auto L = fs[size_t(s)].laurent(0.0);
            combo[size_t(s)] = 2.0 * L.res.c + L.reg.c;
        }
        cplx v = coeff0(combo, grid);
        out[j] = A.t > 0.0 ? v / A.t : v;
    }
    return out;
}

std::map<OKey, cplx> sphere_regularity(const Assembled& A) {
    std::map<OKey, cplx> out;
    const auto& grid = A.grid;
    for (const auto& e : A.g.edges) {
        OKey key{e.a, e.b};
        const ChartId cid = ChartId::edge(e.a, e.b);
        const auto& fs = A.t > 0.0 ? A.chart.at(cid) : A.dt.at(cid);
        std::vector<cplx> combo(size_t(grid.total()));
        for (int s = 0; s < grid.total(); ++s) {
            cplx q = A.sphere.at(key).q[size_t(s)];
            Moebius W{1.0, q, -q, 1.0};  // z = (w+q)/(1-qw)
            RationalForm fw = fs[size_t(s)].pullback(W);
            auto L = fw.laurent(0.0);
            combo[size_t(s)] = grid.lambda[size_t(s)] * (2.0 * L.res.b + L.reg.b);
        }
        cplx v = coeff0(combo, grid);
        out[key] = A.t > 0.0 ? v / A.t : v;
    }
    return out;
}

std::vector<cplx> ray_kappa(const Assembled& A, int ray_index) {
    const GraphRay& r = A.g.rays[size_t(ray_index)];
    const auto& fs = A.chart.at(ChartId::vertex(r.vertex));
    const auto& rv = A.ray.at(ray_index);
    std::vector<cplx> out(size_t(A.grid.total()));
    for (int s = 0; s < A.grid.total(); ++s) {
        cplx p = rv.p[size_t(s)];
        out[size_t(s)] = p * A.grid.lambda[size_t(s)] * fs[size_t(s)].eval(p).b;
    }
    return out;
}

Mat2 node_period(const Assembled& A, int j, int k, double rad, int s, int n) {
    Moebius C = A.atlas.global(ChartId::vertex(j)).compose(
        node_coord_inv(A.atlas.node_at(j, k).p));
    const RationalForm& f = A.global_form[size_t(s)];
    Mat2 acc{};
    for (int i = 0; i < n; ++i) {
        double th = 2.0 * M_PI * (i + 0.5) / n;
        cplx zeta = std::polar(rad, th);
        cplx w = C(zeta);
        cplx dw = C.deriv(zeta) * zeta * cplx(0.0, 1.0) * (2.0 * M_PI / n);
        acc = acc + f.eval(w) * dw;
    }
    return acc;
}

}  // namespace dpw
