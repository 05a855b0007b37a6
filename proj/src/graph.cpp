#include "dpw/graph.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace dpw {

static constexpr double kPi = 3.14159265358979323846;

std::vector<int> WeightedGraph::vertex_ids() const {
    std::vector<int> ids;
    ids.reserve(vertices.size());
    for (const auto& kv : vertices) ids.push_back(kv.first);
    return ids;
}

cplx WeightedGraph::pos(int id) const {
    auto it = vertices.find(id);
    if (it == vertices.end()) throw ParseError("unknown vertex id " + std::to_string(id));
    return it->second;
}

bool WeightedGraph::has_vertex(int id) const { return vertices.count(id) > 0; }

double WeightedGraph::edge_length(const GraphEdge& e) const {
    return std::abs(pos(e.b) - pos(e.a));
}

cplx WeightedGraph::edge_dir(int from, const GraphEdge& e) const {
    int to = (from == e.a) ? e.b : e.a;
    cplx d = pos(to) - pos(from);
    double L = std::abs(d);
    if (L <= 0) throw ParseError("zero-length edge");
    return d / L;
}

std::vector<int> WeightedGraph::incident_edges(int id) const {
    std::vector<int> out;
    for (int i = 0; i < (int)edges.size(); ++i)
        if (edges[i].a == id || edges[i].b == id) out.push_back(i);
    return out;
}

std::vector<int> WeightedGraph::incident_rays(int id) const {
    std::vector<int> out;
    for (int i = 0; i < (int)rays.size(); ++i)
        if (rays[i].vertex == id) out.push_back(i);
    return out;
}

std::map<int, cplx> WeightedGraph::forces() const {
    std::map<int, cplx> F;
    for (const auto& kv : vertices) F[kv.first] = 0.0;
    for (const auto& e : edges) {
        cplx u = edge_dir(e.a, e);
        F[e.a] += e.weight * u;
        F[e.b] -= e.weight * u;
    }
    for (const auto& r : rays) F[r.vertex] += r.weight * ray_dir(r);
    return F;
}

double WeightedGraph::max_force() const {
    double m = 0.0;
    for (const auto& kv : forces()) m = std::max(m, std::abs(kv.second));
    return m;
}

bool WeightedGraph::balanced(double tol) const { return max_force() <= tol; }

void WeightedGraph::validate() const {
    if (vertices.empty()) throw ParseError("graph has no vertices");
    for (const auto& kv : vertices) {
        if (kv.first <= 0) throw ParseError("vertex ids must be positive");
        if (!std::isfinite(kv.second.real()) || !std::isfinite(kv.second.imag()))
            throw ParseError("vertex position not finite");
    }
    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges) {
        if (!has_vertex(e.a) || !has_vertex(e.b))
            throw ParseError("edge references unknown vertex");
        if (e.a == e.b) throw ParseError("self-loop edge");
        if (e.a >= e.b) throw ParseError("edge not canonical (a < b expected)");
        if (!seen.insert({e.a, e.b}).second) throw ParseError("duplicate edge");
        if (e.weight == 0.0 || !std::isfinite(e.weight))
            throw ParseError("edge weight must be a nonzero real");
        if (edge_length(e) <= 0) throw ParseError("coincident edge endpoints");
    }
    for (const auto& r : rays) {
        if (!has_vertex(r.vertex)) throw ParseError("ray references unknown vertex");
        if (r.weight == 0.0 || !std::isfinite(r.weight))
            throw ParseError("ray weight must be a nonzero real");
        if (!std::isfinite(r.angle)) throw ParseError("ray angle not finite");
    }
}

bool WeightedGraph::edges_length_two(double tol) const {
    for (const auto& e : edges)
        if (std::abs(edge_length(e) - 2.0) > tol) return false;
    return true;
}

int WeightedGraph::base_vertex() const {
    if (vertices.empty()) throw ParseError("graph has no vertices");
    return vertices.begin()->first;
}

void WeightedGraph::rotate(double angle) {
    cplx w = std::polar(1.0, angle);
    for (auto& kv : vertices) kv.second *= w;
    for (auto& r : rays) r.angle += angle;
    rotation_applied += angle;
}

// distance (in angle) of a unit direction from the real axis
static double axis_angle_gap(cplx u) {
    double a = std::abs(std::arg(u));
    return std::min(a, kPi - a);
}

void WeightedGraph::normalize_directions(double angle_tol) {
    const double step = 1.6180339887498949e-3;  // golden-ratio multiple of 1e-3
    for (int attempt = 0; attempt < 10000; ++attempt) {
        double gap = std::numeric_limits<double>::infinity();
        for (const auto& e : edges) gap = std::min(gap, axis_angle_gap(edge_dir(e.a, e)));
        for (const auto& r : rays) gap = std::min(gap, axis_angle_gap(ray_dir(r)));
        if (gap >= angle_tol) return;
        rotate(step);
    }
    throw DegenerateError("could not rotate graph clear of the real axis");
}

void WeightedGraph::translate_base_to_origin() {
    cplx v0 = pos(base_vertex());
    for (auto& kv : vertices) kv.second -= v0;
}

// ---------------------------------------------------------------------
// Parameter packing shared by the rank test and the deformation solver.
// Order: vertex positions (x,y per vertex, sorted by id), ray angles,
// edge weights, ray weights.

namespace {

std::vector<double> pack_params(const WeightedGraph& g) {
    std::vector<double> p;
    for (const auto& kv : g.vertices) {
        p.push_back(kv.second.real());
        p.push_back(kv.second.imag());
    }
    for (const auto& r : g.rays) p.push_back(r.angle);
    for (const auto& e : g.edges) p.push_back(e.weight);
    for (const auto& r : g.rays) p.push_back(r.weight);
    return p;
}

WeightedGraph unpack_params(const WeightedGraph& proto, const std::vector<double>& p) {
    WeightedGraph g = proto;
    size_t i = 0;
    for (auto& kv : g.vertices) {
        kv.second = cplx(p[i], p[i + 1]);
        i += 2;
    }
    for (auto& r : g.rays) r.angle = p[i++];
    for (auto& e : g.edges) e.weight = p[i++];
    for (auto& r : g.rays) r.weight = p[i++];
    return g;
}

// value map: forces (2 per vertex) then edge lengths
Eigen::VectorXd value_map(const WeightedGraph& g) {
    Eigen::VectorXd v(2 * (int)g.vertices.size() + (int)g.edges.size());
    int i = 0;
    auto F = g.forces();
    for (const auto& kv : F) {
        v[i++] = kv.second.real();
        v[i++] = kv.second.imag();
    }
    for (const auto& e : g.edges) v[i++] = g.edge_length(e);
    return v;
}

Eigen::MatrixXd fd_jacobian(const WeightedGraph& g) {
    std::vector<double> p0 = pack_params(g);
    Eigen::VectorXd v0 = value_map(g);
    Eigen::MatrixXd J(v0.size(), (int)p0.size());
    const double h = 1e-6;
    for (int c = 0; c < (int)p0.size(); ++c) {
        std::vector<double> p = p0;
        double step = h * (1.0 + std::abs(p[c]));
        p[c] += step;
        Eigen::VectorXd v1 = value_map(unpack_params(g, p));
        J.col(c) = (v1 - v0) / step;
    }
    return J;
}

}  // namespace

NondegeneracyReport nondegeneracy(const WeightedGraph& g) {
    Eigen::MatrixXd J = fd_jacobian(g);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    NondegeneracyReport rep;
    rep.rows = (int)J.rows();
    rep.cols = (int)J.cols();
    const auto& s = svd.singularValues();
    double cutoff = (s.size() > 0) ? 1e-8 * s[0] : 0.0;
    for (int i = 0; i < s.size(); ++i) {
        rep.singular_values.push_back(s[i]);
        if (s[i] > cutoff) ++rep.rank;
    }
    rep.surjective = (rep.rank == rep.rows);
    return rep;
}

WeightedGraph deform(const WeightedGraph& g, const DeformTargets& targets,
                     double tol, int max_iter) {
    WeightedGraph cur = g;
    // target vector: current values overridden by explicit targets
    auto build_target = [&](const WeightedGraph& ref) {
        Eigen::VectorXd t = value_map(ref);
        int i = 0;
        for (const auto& kv : ref.vertices) {
            auto it = targets.forces.find(kv.first);
            if (it != targets.forces.end()) {
                t[i] = it->second.real();
                t[i + 1] = it->second.imag();
            }
            i += 2;
        }
        for (const auto& e : ref.edges) {
            auto it = targets.lengths.find({e.a, e.b});
            if (it != targets.lengths.end()) t[i] = it->second;
            ++i;
        }
        return t;
    };
    Eigen::VectorXd target = build_target(g);
    for (int iter = 0; iter < max_iter; ++iter) {
        Eigen::VectorXd v = value_map(cur);
        Eigen::VectorXd r = target - v;
        if (r.lpNorm<Eigen::Infinity>() <= tol) return cur;
        Eigen::MatrixXd J = fd_jacobian(cur);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
        double cutoff = 1e-8 * svd.singularValues()[0];
        int rank = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()[i] > cutoff) ++rank;
        if (rank < J.rows())
            throw DegenerateError("graph deformation Jacobian is rank deficient");
        svd.setThreshold(1e-8);
        Eigen::VectorXd dp = svd.solve(r);  // least-norm update
        std::vector<double> p = pack_params(cur);
        for (int i = 0; i < dp.size(); ++i) p[i] += dp[i];
        cur = unpack_params(cur, p);
    }
    Eigen::VectorXd r = target - value_map(cur);
    if (r.lpNorm<Eigen::Infinity>() <= tol) return cur;
    throw MaxIterationsError("graph deformation did not converge");
}

// ---------------------------------------------------------------------
// Pre-embeddedness

namespace {

struct LinObj {
    cplx p0;     // anchor
    cplx d;      // unit direction
    double len;  // finite for edges, +inf for rays
    int va, vb;  // endpoint vertex ids (vb = -1 for rays)
};

double cross2(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

double dist_point_obj(cplx P, const LinObj& o) {
    double t = ((P - o.p0) * std::conj(o.d)).real();
    t = std::clamp(t, 0.0, o.len);
    return std::abs(P - (o.p0 + t * o.d));
}

double dist_obj_obj(const LinObj& A, const LinObj& B) {
    double den = cross2(A.d, B.d);
    if (std::abs(den) > 1e-12) {
        cplx w = B.p0 - A.p0;
        double t1 = cross2(w, B.d) / den;
        double t2 = cross2(w, A.d) / den;
        if (t1 >= 0 && t1 <= A.len && t2 >= 0 && t2 <= B.len) return 0.0;
    }
    double best = std::min(dist_point_obj(A.p0, B), dist_point_obj(B.p0, A));
    if (std::isfinite(A.len))
        best = std::min(best, dist_point_obj(A.p0 + A.len * A.d, B));
    if (std::isfinite(B.len))
        best = std::min(best, dist_point_obj(B.p0 + B.len * B.d, A));
    return best;
}

}  // namespace

PreEmbeddedReport pre_embedded(const WeightedGraph& g) {
    std::vector<LinObj> objs;
    for (const auto& e : g.edges) {
        cplx pa = g.pos(e.a);
        cplx d = g.pos(e.b) - pa;
        double L = std::abs(d);
        objs.push_back({pa, d / L, L, e.a, e.b});
    }
    for (const auto& r : g.rays)
        objs.push_back({g.pos(r.vertex), WeightedGraph::ray_dir(r),
                        std::numeric_limits<double>::infinity(), r.vertex, -1});

    PreEmbeddedReport rep;
    rep.min_pair_distance = std::numeric_limits<double>::infinity();
    rep.min_angle = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < objs.size(); ++i) {
        for (size_t j = i + 1; j < objs.size(); ++j) {
            const LinObj& A = objs[i];
            const LinObj& B = objs[j];
            int shared = -1;
            if (A.va == B.va || A.va == B.vb) shared = A.va;
            else if (A.vb >= 0 && (A.vb == B.va || A.vb == B.vb)) shared = A.vb;
            if (shared >= 0) {
                // outgoing directions at the common endpoint
                cplx da = (A.va == shared) ? A.d : -A.d;
                cplx db = (B.va == shared) ? B.d : -B.d;
                double c = std::clamp((da * std::conj(db)).real(), -1.0, 1.0);
                rep.min_angle = std::min(rep.min_angle, std::acos(c));
            } else {
                rep.min_pair_distance = std::min(rep.min_pair_distance, dist_obj_obj(A, B));
            }
        }
    }
    rep.pre_embedded = (rep.min_pair_distance > 2.0) && (rep.min_angle > kPi / 3.0);
    return rep;
}

// ---------------------------------------------------------------------
// JSON I/O

using nlohmann::json;

WeightedGraph parse_graph(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    WeightedGraph g;
    try {
        for (const auto& v : j.at("vertices")) {
            int id = v.at("id").get<int>();
            if (g.vertices.count(id)) throw ParseError("duplicate vertex id");
            g.vertices[id] = cplx(v.at("x").get<double>(), v.at("y").get<double>());
        }
        if (j.count("edges"))
            for (const auto& e : j["edges"]) {
                GraphEdge ge;
                ge.a = e.at("a").get<int>();
                ge.b = e.at("b").get<int>();
                if (ge.a > ge.b) std::swap(ge.a, ge.b);
                ge.weight = e.at("weight").get<double>();
                g.edges.push_back(ge);
            }
        if (j.count("rays"))
            for (const auto& r : j["rays"]) {
                GraphRay gr;
                gr.vertex = r.at("vertex").get<int>();
                gr.angle = r.at("angle_deg").get<double>() * kPi / 180.0;
                gr.weight = r.at("weight").get<double>();
                g.rays.push_back(gr);
            }
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(std::string("graph schema error: ") + e.what());
    }
    g.validate();
    g.normalize_directions();
    return g;
}

WeightedGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graph file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str());
}

std::string graph_to_json(const WeightedGraph& g) {
    json j;
    j["vertices"] = json::array();
    for (const auto& kv : g.vertices)
        j["vertices"].push_back({{"id", kv.first},
                                 {"x", kv.second.real()},
                                 {"y", kv.second.imag()}});
    j["edges"] = json::array();
    for (const auto& e : g.edges)
        j["edges"].push_back({{"a", e.a}, {"b", e.b}, {"weight", e.weight}});
    j["rays"] = json::array();
    for (const auto& r : g.rays)
        j["rays"].push_back({{"vertex", r.vertex},
                             {"angle_deg", r.angle * 180.0 / kPi},
                             {"weight", r.weight}});
    return j.dump(2);
}

void save_graph(const WeightedGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write graph file: " + path);
    out << graph_to_json(g) << "\n";
}

}  // namespace dpw
