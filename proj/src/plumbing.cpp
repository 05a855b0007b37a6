#include "dpw/plumbing.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace dpw {

std::string ChartId::name() const {
    std::ostringstream os;
    if (is_vertex())
        os << "v" << a;
    else
        os << "e" << a << "_" << b;
    return os.str();
}

Moebius node_coord(cplx p) {
    // zeta = -2i (z - p)/(z + p)
    return Moebius{cplx(0.0, -2.0), cplx(0.0, 2.0) * p, 1.0, p}.normalized();
}

Moebius node_coord_inv(cplx p) {
    // z = p (2 + i zeta)/(2 - i zeta)
    return Moebius{p * cplx(0.0, 1.0), 2.0 * p, cplx(0.0, -1.0), 2.0}.normalized();
}

// argument in (0, 2pi]
static double arg02pi(cplx u) {
    double a = std::arg(u);
    if (a <= 0.0) a += 2.0 * M_PI;
    return a;
}

// ---------------------------------------------------------------------------
// Parameters

static double edge_weight(const WeightedGraph& g, int j, int k) {
    for (const auto& e : g.edges)
        if ((e.a == j && e.b == k) || (e.a == k && e.b == j)) return e.weight;
    throw std::logic_error("edge_weight: no such edge");
}

Params central_params(const WeightedGraph& g, int N, double rho) {
    Params x;
    x.N = N;
    x.rho = rho;
    for (const auto& e : g.edges) {
        double tau = e.weight;
        for (OKey key : {OKey{e.a, e.b}, OKey{e.b, e.a}}) {
            EdgeParams ep;
            // a = tau (lambda - 1)/2, b = c = 0
            ep.a = LoopScalar(N, rho);
            ep.a.set(0, -tau / 2.0);
            ep.a.set(1, tau / 2.0);
            ep.b = LoopScalar(N, rho);
            ep.c = LoopScalar(N, rho);
            ep.theta = 0.0;
            ep.r = tau;
            x.edge[key] = ep;
        }
        SphereParams sp;
        sp.A = LoopScalar(N, rho);
        sp.C = LoopScalar::constant(0.5, N, rho);
        sp.nu = LoopScalar(N, rho);
        x.sphere[OKey{e.a, e.b}] = sp;
    }
    for (size_t i = 0; i < g.rays.size(); ++i) {
        const GraphRay& r = g.rays[i];
        RayParams rp;
        rp.ahat = LoopScalar::constant(r.weight / 2.0, N, rho);
        rp.bhat = LoopScalar(N, rho);
        rp.theta = LoopScalar::constant(arg02pi(WeightedGraph::ray_dir(r)), N, rho);
        x.ray[int(i)] = rp;
    }
    return x;
}

int param_dim(const WeightedGraph& g, int N) {
    int nE = int(g.edges.size()), nR = int(g.rays.size());
    // per canonical edge: two a,b,c triples (3N+3 each), theta_jk + theta_kj,
    // r for the reversed orientation, A, C, nu (N+1 each)
    return nE * (2 * (3 * N + 3) + 3 + 3 * (N + 1)) + nR * (3 * N + 1);
}

namespace {
struct Packer {
    Eigen::VectorXd v;
    int at = 0;
    void put(double x) { v[at++] = x; }
};
struct Unpacker {
    const Eigen::VectorXd* v;
    int at = 0;
    double get() { return (*v)[at++]; }
};
}  // namespace

static void loop_coeffs(const LoopScalar& f, int lo, int hi, Packer& p) {
    for (int i = lo; i <= hi; ++i) p.put(f.get(i).real());
}
static void loop_coeffs(LoopScalar& f, int lo, int hi, Unpacker& u) {
    for (int i = lo; i <= hi; ++i) f.set(i, u.get());
}

Eigen::VectorXd pack_params(const Params& x, const WeightedGraph& g) {
    Packer p;
    p.v.resize(param_dim(g, x.N));
    for (const auto& [key, e] : x.edge) {
        loop_coeffs(e.a, 0, x.N, p);
        loop_coeffs(e.b, 0, x.N, p);
        loop_coeffs(e.c, 0, x.N, p);
        p.put(e.theta);
        if (key.first > key.second) p.put(e.r);  // canonical r stays fixed
    }
    for (const auto& [key, s] : x.sphere) {
        (void)key;
        loop_coeffs(s.A, 0, x.N, p);
        loop_coeffs(s.C, 0, x.N, p);
        loop_coeffs(s.nu, 0, x.N, p);
    }
    for (const auto& [idx, r] : x.ray) {
        (void)idx;
        loop_coeffs(r.ahat, 1, x.N, p);
        loop_coeffs(r.bhat, 0, x.N, p);
        loop_coeffs(r.theta, 1, x.N, p);
    }
    if (p.at != p.v.size()) throw std::logic_error("pack_params: size mismatch");
    return p.v;
}

Params unpack_params(const Eigen::VectorXd& v, const Params& ref,
                     const WeightedGraph& g) {
    if (v.size() != param_dim(g, ref.N))
        throw std::invalid_argument("unpack_params: wrong length");
    Params x = ref;
    Unpacker u{&v};
    for (auto& [key, e] : x.edge) {
        loop_coeffs(e.a, 0, x.N, u);
        loop_coeffs(e.b, 0, x.N, u);
        loop_coeffs(e.c, 0, x.N, u);
        e.theta = u.get();
        if (key.first > key.second) e.r = u.get();
    }
    for (auto& [key, s] : x.sphere) {
        (void)key;
        loop_coeffs(s.A, 0, x.N, u);
        loop_coeffs(s.C, 0, x.N, u);
        loop_coeffs(s.nu, 0, x.N, u);
    }
    for (auto& [idx, r] : x.ray) {
        (void)idx;
        loop_coeffs(r.ahat, 1, x.N, u);
        loop_coeffs(r.bhat, 0, x.N, u);
        loop_coeffs(r.theta, 1, x.N, u);
    }
    return x;
}

std::vector<std::string> param_labels(const WeightedGraph& g, int N) {
    std::vector<std::string> out;
    auto add = [&](const std::string& base, int lo, int hi) {
        for (int i = lo; i <= hi; ++i)
            out.push_back(base + "[" + std::to_string(i) + "]");
    };
    Params x = central_params(g, N, 1.2);
    for (const auto& [key, e] : x.edge) {
        (void)e;
        std::string tag = std::to_string(key.first) + "," + std::to_string(key.second);
        add("a(" + tag + ")", 0, N);
        add("b(" + tag + ")", 0, N);
        add("c(" + tag + ")", 0, N);
        out.push_back("theta(" + tag + ")");
        if (key.first > key.second) out.push_back("r(" + tag + ")");
    }
    for (const auto& [key, s] : x.sphere) {
        (void)s;
        std::string tag = std::to_string(key.first) + "," + std::to_string(key.second);
        add("A(" + tag + ")", 0, N);
        add("C(" + tag + ")", 0, N);
        add("nu(" + tag + ")", 0, N);
    }
    for (const auto& [idx, r] : x.ray) {
        (void)r;
        std::string tag = "ray" + std::to_string(idx);
        add("ahat(" + tag + ")", 1, N);
        add("bhat(" + tag + ")", 0, N);
        add("theta(" + tag + ")", 1, N);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Atlas

const NodeData& PlumbingAtlas::node_at(int j, int k) const {
    auto it = node.find({j, k});
    if (it == node.end()) throw std::logic_error("node_at: no such oriented edge");
    return it->second;
}

Moebius PlumbingAtlas::global(const ChartId& c) const {
    auto it = to_global.find(c);
    if (it == to_global.end())
        throw std::logic_error("global: chart map not available (t = 0?)");
    return it->second;
}

Moebius PlumbingAtlas::vertex_to_edge(int j, int k) const {
    const NodeData& nd = node_at(j, k);
    return node_coord_inv(nd.pprime)
        .compose(Moebius::inversion(nd.t_jk))
        .compose(node_coord(nd.p));
}

Moebius PlumbingAtlas::edge_to_vertex(int j, int k) const {
    return vertex_to_edge(j, k).inverse();
}

double PlumbingAtlas::removed_radius(int j, int k) const {
    return std::abs(node_at(j, k).t_jk) / eps;
}

PlumbingAtlas build_atlas(const WeightedGraph& g, const Params& x, double t,
                          double eps, double eps_prime) {
    PlumbingAtlas at;
    at.t = t;
    at.eps = eps;
    at.eps_prime = eps_prime;
    at.graph = g;

    // tree check: connected and |E| = |V| - 1
    auto ids = g.vertex_ids();
    if (ids.empty()) throw DegenerateError("build_atlas: empty graph");
    std::map<int, std::vector<int>> adj;
    for (const auto& e : g.edges) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    std::set<int> seen{ids.front()};
    std::deque<int> todo{ids.front()};
    while (!todo.empty()) {
        int j = todo.front();
        todo.pop_front();
        for (int k : adj[j])
            if (seen.insert(k).second) todo.push_back(k);
    }
    if (seen.size() != ids.size())
        throw DegenerateError("build_atlas: graph is not connected");
    if (g.edges.size() + 1 != ids.size())
        throw DegenerateError("build_atlas: graph has a cycle; only trees are supported");

    for (int j : ids) at.charts.push_back(ChartId::vertex(j));
    for (const auto& e : g.edges) at.charts.push_back(ChartId::edge(e.a, e.b));
    at.base = ChartId::vertex(g.base_vertex());

    for (const auto& e : g.edges) {
        for (OKey key : {OKey{e.a, e.b}, OKey{e.b, e.a}}) {
            auto it = x.edge.find(key);
            if (it == x.edge.end())
                throw std::logic_error("build_atlas: params missing an edge");
            const EdgeParams& ep = it->second;
            NodeData nd;
            cplx u = g.edge_dir(key.first, e);
            nd.p = u * std::polar(1.0, ep.theta);
            nd.pprime = key.first < key.second ? 1.0 : -1.0;
            nd.r = ep.r;
            nd.t_jk = ep.r * t;
            if (t != 0.0 && std::abs(nd.t_jk) >= eps * eps)
                throw DegenerateError("build_atlas: |t_jk| must stay below eps^2");
            if (t != 0.0 && nd.t_jk == 0.0)
                throw DegenerateError("build_atlas: zero gluing rate at positive t");
            at.node[key] = nd;
        }
    }

    if (t != 0.0) {
        at.to_global[at.base] = Moebius::identity();
        std::deque<int> bfs{at.base.a};
        std::set<int> done{at.base.a};
        while (!bfs.empty()) {
            int j = bfs.front();
            bfs.pop_front();
            Moebius Tj = at.to_global.at(ChartId::vertex(j));
            for (int k : adj[j]) {
                if (!done.insert(k).second) continue;
                Moebius Te = Tj.compose(at.edge_to_vertex(j, k));
                at.to_global[ChartId::edge(j, k)] = Te;
                at.to_global[ChartId::vertex(k)] = Te.compose(at.vertex_to_edge(k, j));
                bfs.push_back(k);
            }
        }
    }
    return at;
}

}  // namespace dpw
