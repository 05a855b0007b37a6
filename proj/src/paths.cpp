#include "dpw/paths.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dpw {

namespace {
double arg02(cplx z) {
    double a = std::arg(z);
    if (a <= 0.0) a += 2.0 * std::numbers::pi;
    return a;
}
}  // namespace

namespace {
// z = p (2 + i zeta) / (2 - i zeta) and dz/dzeta = 4 i p / (2 - i zeta)^2
cplx node_z(cplx p, cplx zeta) {
    return p * (2.0 + cplx(0, 1) * zeta) / (2.0 - cplx(0, 1) * zeta);
}
cplx node_dz(cplx p, cplx zeta, cplx zetadot) {
    cplx den = 2.0 - cplx(0, 1) * zeta;
    return p * (cplx(0, 4) / (den * den)) * zetadot;
}
}  // namespace

cplx PathSeg::point(double s) const {
    switch (kind) {
        case Line: return a + s * (b - a);
        case Arc: return center + rad * std::polar(1.0, th0 + s * (th1 - th0));
        case NodeReal: return node_z(p, x0 * std::pow(x1 / x0, s));
        case NodeRay: return node_z(p, dir * (x0 * std::pow(x1 / x0, s)));
        case NodeArc: return node_z(p, rad * std::polar(1.0, th0 + s * (th1 - th0)));
    }
    return {};
}

cplx PathSeg::velocity(double s) const {
    switch (kind) {
        case Line: return b - a;
        case Arc: {
            double dth = th1 - th0;
            return cplx(0, 1) * rad * dth * std::polar(1.0, th0 + s * dth);
        }
        case NodeReal: {
            double x = x0 * std::pow(x1 / x0, s);
            return node_dz(p, x, x * std::log(x1 / x0));
        }
        case NodeRay: {
            double x = x0 * std::pow(x1 / x0, s);
            cplx zeta = dir * x;
            return node_dz(p, zeta, zeta * std::log(x1 / x0));
        }
        case NodeArc: {
            double dth = th1 - th0;
            cplx zeta = rad * std::polar(1.0, th0 + s * dth);
            return node_dz(p, zeta, cplx(0, 1) * zeta * dth);
        }
    }
    return {};
}

double PathSeg::rough_length() const {
    double len = 0;
    cplx prev = point(0.0);
    for (int i = 1; i <= 8; ++i) {
        cplx cur = point(i / 8.0);
        len += std::abs(cur - prev);
        prev = cur;
    }
    return len;
}

PathSeg PathSeg::line(ChartId c, cplx a, cplx b) {
    PathSeg s;
    s.chart = c;
    s.kind = Line;
    s.a = a;
    s.b = b;
    return s;
}

PathSeg PathSeg::arc(ChartId c, cplx center, double rad, double th0, double th1) {
    PathSeg s;
    s.chart = c;
    s.kind = Arc;
    s.center = center;
    s.rad = rad;
    s.th0 = th0;
    s.th1 = th1;
    return s;
}

PathSeg PathSeg::node_real(ChartId c, cplx p, double x0, double x1) {
    if (x0 * x1 <= 0.0)
        throw std::invalid_argument("node_real: endpoints must share a sign");
    PathSeg s;
    s.chart = c;
    s.kind = NodeReal;
    s.p = p;
    s.x0 = x0;
    s.x1 = x1;
    return s;
}

PathSeg PathSeg::node_ray(ChartId c, cplx p, cplx dir, double x0, double x1) {
    if (x0 <= 0.0 || x1 <= 0.0)
        throw std::invalid_argument("node_ray: endpoints must be positive");
    PathSeg s;
    s.chart = c;
    s.kind = NodeRay;
    s.p = p;
    s.dir = dir / std::abs(dir);
    s.x0 = x0;
    s.x1 = x1;
    return s;
}

PathSeg PathSeg::node_arc(ChartId c, cplx p, double rad, double th0, double th1) {
    PathSeg s;
    s.chart = c;
    s.kind = NodeArc;
    s.p = p;
    s.rad = rad;
    s.th0 = th0;
    s.th1 = th1;
    return s;
}

PathSeg seg_reverse(const PathSeg& s) {
    PathSeg r = s;
    switch (s.kind) {
        case PathSeg::Line: std::swap(r.a, r.b); break;
        case PathSeg::Arc:
        case PathSeg::NodeArc: std::swap(r.th0, r.th1); break;
        case PathSeg::NodeReal:
        case PathSeg::NodeRay: std::swap(r.x0, r.x1); break;
    }
    return r;
}

Path path_reverse(const Path& p) {
    Path r;
    for (auto it = p.rbegin(); it != p.rend(); ++it) r.push_back(seg_reverse(*it));
    return r;
}

Path path_concat(const Path& p, const Path& q) {
    Path r = p;
    r.insert(r.end(), q.begin(), q.end());
    return r;
}

OKey ray_key(int vertex, int ray_index) { return {vertex, -1 - ray_index}; }
bool is_ray_item(const OKey& k) { return k.second < 0; }
int ray_item_index(const OKey& k) { return -1 - k.second; }

PathSet build_paths(const PlumbingAtlas& at) {
    const double pi = std::numbers::pi;
    const WeightedGraph& g = at.graph;
    const double eps = at.eps, epsp = at.eps_prime;
    const double eps0 = 2.0 * std::atan(epsp / 2.0);
    const double margin = 0.05;
    if (eps < eps0 + margin)
        throw DegenerateError("paths: parking angle eps too small for the node radius");

    PathSet ps;

    // Widen the rectangles when a removed node disk sticks out radially.
    double remmax = 0.0;
    for (const auto& [key, nd] : at.node)
        remmax = std::max(remmax, std::abs(nd.t_jk) / at.eps);
    double extent = (2.0 + remmax) / (2.0 - remmax);
    ps.Rout = std::max(1.25, extent * 1.05);

    for (int j : g.vertex_ids()) {
        std::vector<std::pair<double, OKey>> items;
        for (int ei : g.incident_edges(j)) {
            const GraphEdge& e = g.edges[size_t(ei)];
            int k = (e.a == j) ? e.b : e.a;
            items.push_back({arg02(g.edge_dir(j, e)), OKey{j, k}});
        }
        for (int ri : g.incident_rays(j))
            items.push_back({arg02(WeightedGraph::ray_dir(g.rays[size_t(ri)])), ray_key(j, ri)});
        std::sort(items.begin(), items.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });

        if (!items.empty()) {
            if (items.front().first < eps0 + margin)
                throw DegenerateError("paths: attachment direction too close to the base point");
            if (items.back().first + eps > 2.0 * pi - margin)
                throw DegenerateError("paths: attachment direction too close to the base point");
            for (size_t i = 0; i + 1 < items.size(); ++i)
                if (items[i + 1].first - items[i].first < eps + eps0 + margin)
                    throw DegenerateError("paths: attachment directions too close together");
        }

        ChartId cj = ChartId::vertex(j);
        std::vector<OKey>& ord = ps.order[j];
        for (size_t i = 0; i < items.size(); ++i) {
            const OKey& key = items[i].second;
            double a = items[i].first;
            double phi = a + eps;
            cplx w = std::polar(1.0, phi);
            ord.push_back(key);
            ps.ang[key] = a;

            Path d;
            d.push_back(PathSeg::line(cj, 1.0, ps.Rout));
            d.push_back(PathSeg::arc(cj, 0.0, ps.Rout, 0.0, phi));
            d.push_back(PathSeg::line(cj, ps.Rout * w, (1.0 / ps.Rout) * w));
            d.push_back(PathSeg::arc(cj, 0.0, 1.0 / ps.Rout, phi, 0.0));
            d.push_back(PathSeg::line(cj, 1.0 / ps.Rout, 1.0));
            ps.delta[key] = d;
            ps.delta_prime[key] = (i == 0) ? Path{} : ps.delta.at(items[i - 1].second);

            Path al;
            al.push_back(PathSeg::line(cj, 1.0, ps.Rout));
            al.push_back(PathSeg::arc(cj, 0.0, ps.Rout, 0.0, phi));
            al.push_back(PathSeg::line(cj, ps.Rout * w, w));
            ps.alpha[key] = al;
        }
    }

    if (at.t == 0.0) return ps;  // neck crossings only exist for t != 0

    for (const GraphEdge& e : g.edges) {
        int j = e.a, k = e.b;
        const NodeData& njk = at.node_at(j, k);
        const NodeData& nkj = at.node_at(k, j);
        if (njk.t_jk * nkj.t_jk <= 0.0)
            throw DegenerateError("paths: gluing rates of an edge differ in sign");
        double sgn = (njk.t_jk > 0.0) ? 1.0 : -1.0;
        double apjk = arg02(njk.p), apkj = arg02(nkj.p);

        Path b;
        b.push_back(PathSeg::arc(ChartId::vertex(j), 0.0, 1.0,
                                 ps.ang.at({j, k}) + eps, apjk + eps0));
        b.push_back(PathSeg::node_real(ChartId::vertex(j), njk.p, epsp,
                                       std::abs(njk.t_jk) / epsp));
        b.push_back(PathSeg::arc(ChartId::edge(j, k), 0.0, 1.0, sgn * eps0,
                                 sgn * (pi - eps0)));
        b.push_back(PathSeg::node_real(ChartId::edge(j, k), -1.0, -sgn * epsp,
                                       -sgn * std::abs(nkj.t_jk) / epsp));

        // land at the parking point of the predecessor at vertex k (or at the
        // base point when (k,j) is the first item there)
        const std::vector<OKey>& ordk = ps.order.at(k);
        size_t pos = size_t(std::find(ordk.begin(), ordk.end(), OKey{k, j}) - ordk.begin());
        double target = (pos == 0) ? 0.0 : ps.ang.at(ordk[pos - 1]) + eps;
        b.push_back(PathSeg::arc(ChartId::vertex(k), 0.0, 1.0, apkj - eps0, target));
        ps.beta[{j, k}] = b;

        Path G = path_concat(ps.alpha.at({j, k}), b);
        if (pos > 0) G = path_concat(G, path_reverse(ps.alpha.at(ordk[pos - 1])));
        ps.big_gamma[{j, k}] = G;
    }

    return ps;
}

}  // namespace dpw
