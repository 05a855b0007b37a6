#include "dpw/mesh.hpp"

#include "dpw/ode.hpp"
#include "dpw/paths.hpp"
#include "dpw/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <stdexcept>

namespace dpw {

namespace {

const double PI = std::numbers::pi;

double arg02m(cplx z) {
    double a = std::arg(z);
    if (a <= 0.0) a += 2.0 * PI;
    return a;
}

cplx unit(double th) { return std::polar(1.0, th); }

// linear part of the output motion x -> (1 - x3, -x2, -x1); applied to normals
Vec3 psi_lin(const Vec3& v) { return {-v.z, -v.y, -v.x}; }

Vec3 mirror3(const Vec3& v) { return {v.x, v.y, -v.z}; }

struct Lattice {
    int ni = 0, na = 0;
    bool wrap = false;
    std::vector<int> idx;

    Lattice(int ni_, int na_, bool wrap_)
        : ni(ni_), na(na_), wrap(wrap_), idx(size_t(ni_) * size_t(na_), -1) {}
    int& at(int i, int a) { return idx[size_t(i) * size_t(na) + size_t(a)]; }
    int get(int i, int a) const { return idx[size_t(i) * size_t(na) + size_t(a)]; }
};

struct PatchAccum {          // per-patch running statistics
    Vec3 sum{};
    int count = 0;
    std::vector<int> members;
    void add(const Vec3& f, int id) {
        sum = sum + f;
        ++count;
        members.push_back(id);
    }
};

class Builder {
public:
    Builder(const WeightedGraph& g0, const Params& x0, double t,
            const MeshOptions& o)
        : opt(o),
          xp(x0),
          A(assemble(g0, x0, t, CircleGrid(x0.N, x0.rho))),
          gx(std::min(A.grid.M / 2 - 1, std::max(x0.N, o.deep_degree)), x0.rho,
             A.grid.M),
          ps(build_paths(A.atlas)) {
        res = std::max(8, opt.res);
        if (res % 2) ++res;
        epsp = A.atlas.eps_prime;
        r_out = std::max(opt.r_out, 2.0);
        r_in = std::min(opt.r_in, 0.5);
        double tmax = 0.0;
        for (const auto& [k, nd] : A.atlas.node)
            tmax = std::max(tmax, std::abs(nd.t_jk));
        band_hi = std::max(1.075, 1.0 + 4.0 * tmax);
        r_park = std::max({ps.Rout, (2.0 + epsp) / (2.0 - epsp), 1.05 * band_hi});
        // the attachment point of a ray moves with lambda; the notch must
        // clear the whole pole cloud
        double cmax = opt.ray_clear;
        for (const auto& [ri, rv] : A.ray) {
            cplx u = rv.p[size_t(A.grid.M)];
            double spread = 0.0;
            for (int m = 0; m < A.grid.M; ++m)
                spread = std::max(spread, std::abs(rv.p[size_t(m)] - u));
            ray_spread[ri] = spread;
            ray_center[ri] = u;
            ray_notch[ri] = std::max(opt.ray_clear, 1.6 * spread);
            cmax = std::max(cmax, ray_notch[ri]);
        }
        clear_ang = std::max(2.0 * std::atan(epsp / 2.0),
                             std::asin(std::min(0.95, cmax))) +
                    0.08;
    }

    MeshStats run(const std::string& path);

private:
    MeshOptions opt;
    Params xp;
    Assembled A;
    CircleGrid gx;  // extended-degree view of the same samples, for patches
                    // close to the poles where the loop content is richer
    PathSet ps;
    int res = 32;
    double epsp = 0.25, band_hi = 1.075, r_park = 1.3, clear_ang = 0.33;
    double r_in = 0.02, r_out = 50.0;

    std::map<int, double> ray_spread, ray_notch;
    std::map<int, cplx> ray_center;
    std::map<int, SampledMatrix> anchors;
    std::vector<Vec3> pos, nrm;
    std::vector<std::array<int, 3>> tris;
    std::vector<std::pair<std::string, size_t>> groups;   // name, first tri
    std::vector<std::pair<std::string, size_t>> pgroups;  // name, first point
    MeshStats st;

    int emit_point(const SampledMatrix& phi, PatchAccum* acc, bool deep = false);
    void faces_from(const Lattice& L);
    void add_sigma_pair(int ia, int ib);
    void open_group(const std::string& name);
    std::string group_of(size_t pid) const;

    void build_anchors();
    void vertex_patch(int j);
    void edge_patch(int j, int k);
    void collar_side(int j, int k);
    void ray_patch(int ri);

    void polar_patch(const ChartId& c, const std::string& name,
                     const SampledMatrix& Y0, double r_start, double cor,
                     const std::vector<double>& item_ang,
                     const std::function<bool(cplx)>& keep, PatchAccum* acc,
                     const OKey* waist = nullptr);
    void collar_rings(const ChartId& c, cplx p, cplx dir, double s_hi,
                      double s_lo, const SampledMatrix& Yhi,
                      const std::string& name, const OKey& waist_key);
    Path vertex_park_path(int j, double th_target) const;
};

void Builder::open_group(const std::string& name) {
    groups.push_back({name, tris.size()});
    pgroups.push_back({name, pos.size()});
}

std::string Builder::group_of(size_t pid) const {
    std::string name;
    for (const auto& [n, first] : pgroups) {
        if (first > pid) break;
        name = n;
    }
    return name;
}

int Builder::emit_point(const SampledMatrix& phi, PatchAccum* acc, bool deep) {
    SymPoint sp = sym_point(phi, deep ? gx : A.grid, opt.iwasawa);
    if (sp.dropped > st.max_dropped) {
        st.max_dropped = sp.dropped;
        st.worst_dropped_group = pgroups.empty() ? "" : pgroups.back().first;
    }
    st.max_defect = std::max(st.max_defect, sp.defect);
    Vec3 f = psi_motion(sp.f);
    pos.push_back(f);
    nrm.push_back(psi_lin(sp.n));
    int id = int(pos.size()) - 1;
    if (acc) acc->add(f, id);
    return id;
}

void Builder::faces_from(const Lattice& L) {
    int amax = L.wrap ? L.na : L.na - 1;
    for (int i = 0; i + 1 < L.ni; ++i) {
        for (int a = 0; a < amax; ++a) {
            int a2 = (a + 1) % L.na;
            int v00 = L.get(i, a), v01 = L.get(i, a2);
            int v10 = L.get(i + 1, a), v11 = L.get(i + 1, a2);
            if (v00 < 0 || v01 < 0 || v10 < 0 || v11 < 0) continue;
            tris.push_back({v00, v10, v11});
            tris.push_back({v00, v11, v01});
        }
    }
}

void Builder::add_sigma_pair(int ia, int ib) {
    if (ia < 0 || ib < 0) return;
    double gap = (pos[size_t(ib)] - mirror3(pos[size_t(ia)])).norm();
    if (gap > st.sigma_gap) {
        st.sigma_gap = gap;
        st.worst_sigma_group = group_of(size_t(ib));
    }
    ++st.sigma_pairs;
}

void Builder::build_anchors() {
    int base = A.atlas.base.a;
    anchors[base] = sm_identity(A.grid);
    std::vector<int> stack{base};
    std::set<int> seen{base};
    while (!stack.empty()) {
        int j = stack.back();
        stack.pop_back();
        for (int ei : A.g.incident_edges(j)) {
            const GraphEdge& e = A.g.edges[size_t(ei)];
            int k = (e.a == j) ? e.b : e.a;
            if (seen.count(k)) continue;
            seen.insert(k);
            stack.push_back(k);
            OKey ce{std::min(j, k), std::max(j, k)};
            const Path& G = ps.big_gamma.at(ce);
            if (ce.first == j)
                anchors[k] = transport(A, G, anchors.at(j), opt.ode);
            else
                anchors[k] = transport(A, path_reverse(G), anchors.at(j), opt.ode);
        }
    }
}

// path from 1_j out to the parking radius and around to the given angle
Path Builder::vertex_park_path(int j, double th_target) const {
    ChartId c = ChartId::vertex(j);
    Path p{PathSeg::line(c, 1.0, r_park),
           PathSeg::arc(c, 0.0, r_park, 0.0, th_target)};
    return p;
}

void Builder::polar_patch(const ChartId& c, const std::string& name,
                          const SampledMatrix& Y0, double r_start, double cor,
                          const std::vector<double>& item_ang,
                          const std::function<bool(cplx)>& keep,
                          PatchAccum* acc, const OKey* waist) {
    open_group(name);
    bool no_items = item_ang.empty();
    double bh = band_hi, bl = 1.0 / band_hi;

    // ring radii: outer lattice [bh .. r_out], inner lattice mirrors it
    int nseg = std::max(1, int(std::ceil(opt.rings_per_decade *
                                         std::log10(r_out / bh))));
    std::vector<double> outer(size_t(nseg) + 1);
    for (int i = 0; i <= nseg; ++i)
        outer[size_t(i)] = bh * std::pow(r_out / bh, double(i) / nseg);
    std::vector<double> inner;       // ascending, mirror of outer
    int drop_lo = 0;
    for (int i = nseg; i >= 0; --i) {
        double r = 1.0 / outer[size_t(i)];
        if (r < r_in * 0.999) { ++drop_lo; continue; }
        inner.push_back(r);
    }
    // with no items to dodge, merge everything into one lattice incl. the band
    std::vector<double> merged;
    if (no_items) {
        merged = inner;
        for (double q : {-0.5, 0.0, 0.5}) merged.push_back(std::pow(bh, q));
        merged.insert(merged.end(), outer.begin(), outer.end());
        std::sort(merged.begin(), merged.end());
    }

    // frame at the corridor entry
    SampledMatrix Ycor = Y0;
    if (cor != 0.0)
        Ycor = transport(A, {PathSeg::arc(c, 0.0, r_start, 0.0, cor)}, Ycor,
                         opt.ode);

    // spoke checkpoints at every lattice radius
    const std::vector<double>& up_src = no_items ? merged : outer;
    const std::vector<double>& dn_src = no_items ? merged : inner;
    std::vector<double> up, dn;  // up ascending > r_start; dn descending < r_start
    for (double r : up_src) if (r > r_start * (1 + 1e-12)) up.push_back(r);
    for (double r : dn_src) if (r < r_start * (1 - 1e-12)) dn.push_back(r);
    std::sort(up.begin(), up.end());
    std::sort(dn.begin(), dn.end(), std::greater<>());
    std::map<double, SampledMatrix> ring_frame;
    if (!up.empty()) {
        PathSeg seg = PathSeg::line(c, r_start * unit(cor), up.back() * unit(cor));
        std::vector<double> sv;
        for (double r : up) sv.push_back((r - r_start) / (up.back() - r_start));
        auto fr = transport_points(A, seg, sv, Ycor, opt.ode);
        for (size_t i = 0; i < up.size(); ++i) ring_frame[up[i]] = fr[i];
    }
    if (!dn.empty()) {
        PathSeg seg = PathSeg::line(c, r_start * unit(cor), dn.back() * unit(cor));
        std::vector<double> sv;
        for (double r : dn) sv.push_back((r_start - r) / (r_start - dn.back()));
        auto fr = transport_points(A, seg, sv, Ycor, opt.ode);
        for (size_t i = 0; i < dn.size(); ++i) ring_frame[dn[i]] = fr[i];
    }
    ring_frame[r_start] = Ycor;  // in case r_start is itself a lattice radius

    // ring sweep: full circle from the corridor angle, points on the absolute
    // angular lattice th_a = cor + 2 pi a / res
    auto sweep_ring = [&](double r, Lattice& L, int row) {
        auto it = ring_frame.find(r);
        if (it == ring_frame.end()) return;
        PathSeg seg = PathSeg::arc(c, 0.0, r, cor, cor + 2.0 * PI);
        std::vector<double> sv(size_t(res), 0.0);
        for (int a = 0; a < res; ++a) sv[size_t(a)] = double(a) / res;
        auto fr = transport_points(A, seg, sv, it->second, opt.ode);
        for (int a = 0; a < res; ++a) {
            cplx z = r * unit(cor + 2.0 * PI * a / res);
            if (!keep(z)) continue;
            L.at(row, a) = emit_point(fr[size_t(a)], acc);
        }
    };

    if (no_items) {
        Lattice L(int(merged.size()), res, true);
        for (size_t i = 0; i < merged.size(); ++i) sweep_ring(merged[i], L, int(i));
        faces_from(L);
        // mirror pairs r <-> 1/r when the lattice is reciprocal-symmetric
        for (size_t i = 0; i < merged.size(); ++i) {
            size_t m = merged.size() - 1 - i;
            if (m < i) break;
            if (std::abs(merged[i] * merged[m] - 1.0) > 1e-9) continue;
            for (int a = 0; a < res; ++a)
                add_sigma_pair(L.get(int(i), a), L.get(int(m), a));
        }
        return;
    }

    Lattice Lout(nseg + 1, res, true), Lin(int(inner.size()), res, true);
    for (int i = 0; i <= nseg; ++i) sweep_ring(outer[size_t(i)], Lout, i);
    for (size_t i = 0; i < inner.size(); ++i) sweep_ring(inner[i], Lin, int(i));
    faces_from(Lout);
    faces_from(Lin);

    // mirror pairs across the two lattices: inner[i] = 1/outer[nseg - i - drop]
    for (size_t i = 0; i < inner.size(); ++i) {
        int m = nseg - int(i) - drop_lo;
        if (m < 0 || m > nseg) continue;
        for (int a = 0; a < res; ++a)
            add_sigma_pair(Lin.get(int(i), a), Lout.get(m, a));
    }

    // band fill: annulus [1/bh, bh] in the angular gaps between items
    std::vector<double> items = item_ang;
    std::sort(items.begin(), items.end());
    std::vector<double> bring = {bl, std::pow(bh, -0.5), 1.0, std::pow(bh, 0.5), bh};
    std::map<int, std::vector<int>> band_rows;  // ring index -> point ids, all gaps
    int nit = int(items.size());
    for (int gi = 0; gi < nit; ++gi) {
        double lo = items[size_t(gi)] + clear_ang;
        double hi = (gi + 1 < nit ? items[size_t(gi) + 1] : items[0] + 2.0 * PI) -
                    clear_ang;
        if (hi - lo < 2.2 * (2.0 * PI / res)) continue;
        // lattice angles inside [lo, hi] (angles live on cor + 2 pi a / res)
        std::vector<int> arun;
        std::vector<double> aang;
        for (int a = 0; a < 2 * res; ++a) {
            double th = cor + 2.0 * PI * a / res;
            if (th >= lo && th <= hi) {
                arun.push_back(a % res);
                aang.push_back(th);
            }
            if (th > hi) break;
        }
        if (int(arun.size()) < 2) continue;
        double th0 = aang.front(), th1 = aang.back();

        // descend radially at the first gap angle, then sweep each band ring
        Path pre{PathSeg::line(c, r_start * unit(cor), r_park * unit(cor)),
                 PathSeg::arc(c, 0.0, r_park, cor, th0)};
        SampledMatrix Yg = transport(A, pre, Ycor, opt.ode);
        PathSeg down = PathSeg::line(c, r_park * unit(th0), bring.front() * unit(th0));
        std::vector<double> sv;
        for (auto it = bring.rbegin(); it != bring.rend(); ++it)
            sv.push_back((r_park - *it) / (r_park - bring.front()));
        auto fr = transport_points(A, down, sv, Yg, opt.ode);

        Lattice Lb(int(bring.size()), int(arun.size()), false);
        for (size_t bi = 0; bi < bring.size(); ++bi) {
            const SampledMatrix& Yr = fr[bring.size() - 1 - bi];  // ring bi frame
            PathSeg seg = PathSeg::arc(c, 0.0, bring[bi], th0, th1);
            std::vector<double> svr;
            for (double th : aang) svr.push_back((th - th0) / (th1 - th0));
            auto rfr = transport_points(A, seg, svr, Yr, opt.ode);
            for (size_t ai = 0; ai < arun.size(); ++ai) {
                cplx z = bring[bi] * unit(aang[ai]);
                if (!keep(z)) continue;
                int id = emit_point(rfr[ai], acc);
                Lb.at(int(bi), int(ai)) = id;
                band_rows[int(bi)].push_back(id);
            }
        }
        faces_from(Lb);
        for (size_t bi = 0; bi < bring.size(); ++bi) {
            size_t mi = bring.size() - 1 - bi;
            if (mi < bi) break;
            for (size_t ai = 0; ai < arun.size(); ++ai)
                add_sigma_pair(Lb.get(int(bi), int(ai)), Lb.get(int(mi), int(ai)));
        }
    }

    // for an edge chart, the |w| = 1 band ring lies on the neck waist; track
    // the smallest ring radius seen over the whole band
    if (waist) {
        for (const auto& [bi, ids] : band_rows) {
            if (ids.size() < size_t(res) / 2) continue;
            Vec3 csum{};
            for (int id : ids) csum = csum + pos[size_t(id)];
            Vec3 ctr = csum * (1.0 / double(ids.size()));
            double rmean = 0.0;
            for (int id : ids) rmean += (pos[size_t(id)] - ctr).norm();
            rmean /= double(ids.size());
            auto it = st.neck_waist.find(*waist);
            if (it == st.neck_waist.end() || rmean < it->second)
                st.neck_waist[*waist] = rmean;
        }
    }
}

void Builder::vertex_patch(int j) {
    ChartId c = ChartId::vertex(j);
    std::vector<double> item_ang;
    std::vector<cplx> node_ps;
    std::vector<std::pair<cplx, double>> ray_cs;  // center, notch radius
    auto oit = ps.order.find(j);
    if (oit != ps.order.end()) {
        for (const OKey& it : oit->second) {
            item_ang.push_back(ps.ang.at(it));
            if (is_ray_item(it)) {
                int ri = ray_item_index(it);
                ray_cs.push_back({ray_center.at(ri), ray_notch.at(ri)});
            } else {
                node_ps.push_back(A.atlas.node.at(it).p);
            }
        }
    }
    auto keep = [&, node_ps, ray_cs](cplx z) {
        for (cplx p : node_ps)
            if (std::abs(node_coord(p)(z)) < epsp * 0.999) return false;
        for (const auto& [u, cl] : ray_cs)
            if (std::abs(z - u) < cl * 0.999) return false;
        return true;
    };
    PatchAccum acc;
    polar_patch(c, "sphere_" + std::to_string(j), anchors.at(j), 1.0, 0.0,
                item_ang, keep, &acc);
    if (acc.count > 0) {
        Vec3 ctr = acc.sum * (1.0 / acc.count);
        st.sphere_center[j] = ctr;
        double rbar = 0.0;
        for (int id : acc.members) rbar += (pos[size_t(id)] - ctr).norm();
        rbar /= acc.count;
        double dev = 0.0;
        for (int id : acc.members)
            dev = std::max(dev, std::abs((pos[size_t(id)] - ctr).norm() - rbar));
        st.sphere_rad_dev[j] = dev;
    }
}

void Builder::collar_rings(const ChartId& c, cplx p, cplx dir, double s_hi,
                           double s_lo, const SampledMatrix& Yhi,
                           const std::string& name, const OKey& waist_key) {
    open_group(name);
    int nc = std::max(2, int(std::ceil(2.0 * opt.rings_per_decade *
                                       std::log10(s_hi / s_lo))) + 1);
    std::vector<double> rings(size_t(nc), 0.0);
    for (int i = 0; i < nc; ++i)
        rings[size_t(i)] = s_hi * std::pow(s_lo / s_hi, double(i) / (nc - 1));

    PathSeg spoke = PathSeg::node_ray(c, p, dir, s_hi, s_lo);
    std::vector<double> sv;
    for (double s : rings) sv.push_back(std::log(s / s_hi) / std::log(s_lo / s_hi));
    auto fr = transport_points(A, spoke, sv, Yhi, opt.ode);

    double phi0 = std::arg(dir);
    Lattice L(nc, res, true);
    for (int i = 0; i < nc; ++i) {
        PathSeg seg = PathSeg::node_arc(c, p, rings[size_t(i)], phi0, phi0 + 2.0 * PI);
        std::vector<double> svr(size_t(res), 0.0);
        for (int b = 0; b < res; ++b) svr[size_t(b)] = double(b) / res;
        auto rfr = transport_points(A, seg, svr, fr[size_t(i)], opt.ode);
        Vec3 csum{};
        std::vector<int> ring_ids;
        for (int b = 0; b < res; ++b) {
            int id = emit_point(rfr[size_t(b)], nullptr, true);
            L.at(i, b) = id;
            csum = csum + pos[size_t(id)];
            ring_ids.push_back(id);
        }
        Vec3 ctr = csum * (1.0 / res);
        double rmean = 0.0;
        for (int id : ring_ids) rmean += (pos[size_t(id)] - ctr).norm();
        rmean /= res;
        auto wit = st.neck_waist.find(waist_key);
        if (wit == st.neck_waist.end() || rmean < wit->second)
            st.neck_waist[waist_key] = rmean;
    }
    faces_from(L);
    for (int i = 0; i < nc; ++i)
        for (int b = 0; b < res; ++b)
            add_sigma_pair(L.get(i, b), L.get(i, (res / 2 - b % res + res) % res));
}

void Builder::collar_side(int j, int k) {
    const NodeData& nd = A.atlas.node_at(j, k);
    double rem = A.atlas.removed_radius(j, k);
    double seam = std::max(std::sqrt(std::abs(nd.t_jk)), 1.5 * rem);
    if (seam >= 0.98 * epsp) return;
    ChartId c = ChartId::vertex(j);
    double th_p = ps.ang.at({j, k});
    double rcp = (2.0 + epsp) / (2.0 - epsp);
    Path pre = vertex_park_path(j, th_p);
    if (std::abs(r_park - rcp) > 1e-12)
        pre.push_back(PathSeg::line(c, r_park * unit(th_p), rcp * unit(th_p)));
    SampledMatrix Yc = transport(A, pre, anchors.at(j), opt.ode);
    collar_rings(c, nd.p, cplx(0.0, -1.0), epsp, seam,
                 Yc, "neck_" + std::to_string(j) + "_" + std::to_string(k),
                 canon({j, k}));
}

void Builder::edge_patch(int j, int k) {
    ChartId e = ChartId::edge(j, k);
    ChartId cv = ChartId::vertex(j);
    const NodeData& ndj = A.atlas.node_at(j, k);
    const NodeData& ndk = A.atlas.node_at(k, j);
    double tt = ndj.t_jk;
    double ssw = std::sqrt(std::abs(tt));
    double th_p = ps.ang.at({j, k});
    double rcp = (2.0 + epsp) / (2.0 - epsp);
    cplx dirv(0.0, -1.0);
    cplx dire = cplx(0.0, 1.0) * (tt >= 0 ? 1.0 : -1.0);

    Path pre = vertex_park_path(j, th_p);
    if (std::abs(r_park - rcp) > 1e-12)
        pre.push_back(PathSeg::line(cv, r_park * unit(th_p), rcp * unit(th_p)));
    pre.push_back(PathSeg::node_ray(cv, ndj.p, dirv, epsp, ssw));
    pre.push_back(PathSeg::node_ray(e, cplx(ndj.pprime), dire, ssw, epsp));
    SampledMatrix Ye0 = transport(A, pre, anchors.at(j), opt.ode);
    cplx w0 = node_coord_inv(cplx(ndj.pprime))(dire * epsp);
    double r_start = std::abs(w0);

    std::string ename = "edge_" + std::to_string(j) + "_" + std::to_string(k);
    auto keep = [&](cplx w) {
        return std::abs(node_coord(1.0)(w)) >= epsp * 0.999 &&
               std::abs(node_coord(-1.0)(w)) >= epsp * 0.999;
    };
    OKey ek = canon({j, k});
    polar_patch(e, ename, Ye0, r_start, 0.5 * PI, {0.0, PI}, keep, nullptr, &ek);

    // the two edge-chart half-necks
    double rem_j = A.atlas.removed_radius(j, k);
    double seam_j = std::max(std::sqrt(std::abs(tt)), 1.5 * rem_j);
    if (seam_j < 0.98 * epsp)
        collar_rings(e, cplx(ndj.pprime), dire, epsp, seam_j, Ye0,
                     ename + "_neck_a", canon({j, k}));

    double tk = ndk.t_jk;
    double rem_k = A.atlas.removed_radius(k, j);
    double seam_k = std::max(std::sqrt(std::abs(tk)), 1.5 * rem_k);
    SampledMatrix Y1 = transport(
        A, {PathSeg::arc(e, 0.0, r_start, 0.0, PI)}, Ye0, opt.ode);
    cplx z1 = node_coord(cplx(ndk.pprime))(-w0);
    cplx dirk = z1 / std::abs(z1);  // should be +-i up to roundoff
    if (std::abs(std::abs(z1) - epsp) < 0.05 * epsp && seam_k < 0.98 * epsp)
        collar_rings(e, cplx(ndk.pprime), dirk, std::abs(z1), seam_k, Y1,
                     ename + "_neck_b", canon({j, k}));
}

void Builder::ray_patch(int ri) {
    const GraphRay& r = A.g.rays[size_t(ri)];
    int j = r.vertex;
    ChartId c = ChartId::vertex(j);
    cplx u = ray_center.at(ri);
    double spread = ray_spread.at(ri);

    // end weight: 8 pi t kappa(1) ahat(1)
    std::vector<cplx> kap = ray_kappa(A, ri);
    st.ray_weight[ri] =
        8.0 * PI * A.t * (kap[size_t(A.grid.M)] * xp.ray.at(ri).ahat.eval(1.0)).real();

    double rho_out = ray_notch.at(ri);
    double rho_in = std::max(1.3 * spread, rho_out / 6.0);
    if (rho_in >= rho_out * 0.9) return;
    open_group("ray_" + std::to_string(ri));

    double th_u = arg02m(u);
    Path pre = vertex_park_path(j, th_u);
    pre.push_back(PathSeg::line(c, r_park * unit(th_u), (1.0 + rho_out) * u));
    SampledMatrix Yo = transport(A, pre, anchors.at(j), opt.ode);

    int nr = std::min(40, std::max(4, int(std::ceil(
                 3.0 * opt.rings_per_decade * std::log10(rho_out / rho_in)))));
    std::vector<double> rings(size_t(nr), 0.0);
    for (int i = 0; i < nr; ++i)
        rings[size_t(i)] = rho_out * std::pow(rho_in / rho_out, double(i) / (nr - 1));

    PathSeg spoke = PathSeg::line(c, (1.0 + rho_out) * u, (1.0 + rho_in) * u);
    std::vector<double> sv;
    for (double rho : rings) sv.push_back((rho_out - rho) / (rho_out - rho_in));
    auto fr = transport_points(A, spoke, sv, Yo, opt.ode);

    Lattice L(nr, res, true);
    for (int i = 0; i < nr; ++i) {
        PathSeg seg = PathSeg::arc(c, u, rings[size_t(i)], th_u, th_u + 2.0 * PI);
        std::vector<double> svr(size_t(res), 0.0);
        for (int b = 0; b < res; ++b) svr[size_t(b)] = double(b) / res;
        auto rfr = transport_points(A, seg, svr, fr[size_t(i)], opt.ode);
        for (int b = 0; b < res; ++b) L.at(i, b) = emit_point(rfr[size_t(b)], nullptr, true);
    }
    faces_from(L);
}

MeshStats Builder::run(const std::string& path) {
    build_anchors();
    for (int j : A.g.vertex_ids()) vertex_patch(j);
    for (const auto& [key, nd] : A.atlas.node) collar_side(key.first, key.second);
    for (const GraphEdge& e : A.g.edges) edge_patch(e.a, e.b);
    for (size_t ri = 0; ri < A.g.rays.size(); ++ri) ray_patch(int(ri));

    FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("mesh: cannot open output file " + path);
    std::fprintf(f, "# constant mean curvature one surface, %d points, %d faces\n",
                 int(pos.size()), int(tris.size()));
    for (size_t i = 0; i < pos.size(); ++i)
        std::fprintf(f, "v %.9g %.9g %.9g\n", pos[i].x, pos[i].y, pos[i].z);
    for (size_t i = 0; i < nrm.size(); ++i)
        std::fprintf(f, "vn %.9g %.9g %.9g\n", nrm[i].x, nrm[i].y, nrm[i].z);
    size_t gi = 0;
    std::string open_group;
    std::set<std::string> distinct;
    for (size_t ti = 0; ti < tris.size(); ++ti) {
        while (gi < groups.size() && groups[gi].second <= ti) {
            if (groups[gi].first != open_group) {
                std::fprintf(f, "g %s\n", groups[gi].first.c_str());
                open_group = groups[gi].first;
            }
            distinct.insert(groups[gi].first);
            ++gi;
        }
        std::fprintf(f, "f %d//%d %d//%d %d//%d\n", tris[ti][0] + 1, tris[ti][0] + 1,
                     tris[ti][1] + 1, tris[ti][1] + 1, tris[ti][2] + 1,
                     tris[ti][2] + 1);
    }
    std::fclose(f);

    st.n_points = int(pos.size());
    st.n_faces = int(tris.size());
    st.n_patches = int(distinct.size());
    return st;
}

} // namespace

MeshStats write_mesh(const WeightedGraph& g, const Params& x, double t,
                     const std::string& path, const MeshOptions& opt) {
    if (t <= 0.0) throw std::invalid_argument("mesh: requires t > 0");
    Builder b(g, x, t, opt);
    return b.run(path);
}

} // namespace dpw
