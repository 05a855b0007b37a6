#pragma once
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "dpw/errors.hpp"

namespace dpw {

using cplx = std::complex<double>;

// Planar weighted graph with vertices, finite edges and infinite rays.
// Vertices are points of the plane (stored as complex numbers), every edge
// and ray carries a nonzero real weight.  Rays are anchored at a vertex and
// point in a fixed unit direction.
struct GraphEdge {
    int a = 0, b = 0;     // vertex ids, a < b canonically
    double weight = 0.0;  // tau, symmetric
};

struct GraphRay {
    int vertex = 0;
    double angle = 0.0;  // radians
    double weight = 0.0;
};

struct WeightedGraph {
    std::map<int, cplx> vertices;  // id -> position
    std::vector<GraphEdge> edges;  // canonical a < b
    std::vector<GraphRay> rays;
    double rotation_applied = 0.0;  // normalization rotation, radians

    // --- basic derived quantities -------------------------------------
    std::vector<int> vertex_ids() const;
    cplx pos(int id) const;
    bool has_vertex(int id) const;
    double edge_length(const GraphEdge& e) const;
    // unit direction from `from` towards the other endpoint
    cplx edge_dir(int from, const GraphEdge& e) const;
    static cplx ray_dir(const GraphRay& r) { return std::polar(1.0, r.angle); }

    // incident edges / rays of a vertex (indices into edges / rays)
    std::vector<int> incident_edges(int id) const;
    std::vector<int> incident_rays(int id) const;

    // --- forces and balancing -----------------------------------------
    // F_j = sum of tau * u over incident edges and rays
    std::map<int, cplx> forces() const;
    double max_force() const;
    bool balanced(double tol = 1e-9) const;

    // --- structural checks --------------------------------------------
    void validate() const;  // throws ParseError on malformed data
    // true iff all edge lengths are within tol of 2
    bool edges_length_two(double tol = 1e-9) const;

    // smallest vertex id (base point for integration)
    int base_vertex() const;

    // rotate every vertex and ray direction about the origin
    void rotate(double angle);
    // ensure no edge/ray direction is within angle_tol of the real axis
    // directions +-1; rotates deterministically if needed
    void normalize_directions(double angle_tol = 1e-6);

    // translate so that the base vertex sits at the origin
    void translate_base_to_origin();
};

// ---------------------------------------------------------------------
// Degeneracy rank test.  Parameters: vertex positions (2 each), ray angles,
// edge weights, ray weights.  Values: forces (2 per vertex) followed by
// edge lengths.  The graph is nondegenerate when the finite-difference
// Jacobian of the value map is surjective.
struct NondegeneracyReport {
    int rows = 0, cols = 0, rank = 0;
    bool surjective = false;
    std::vector<double> singular_values;
};

NondegeneracyReport nondegeneracy(const WeightedGraph& g);

// Target forces/lengths for a deformation step.  Missing entries mean
// "keep the current value".
struct DeformTargets {
    std::map<int, cplx> forces;               // per vertex id
    std::map<std::pair<int, int>, double> lengths;  // per canonical edge (a,b)
};

// Least-norm Gauss-Newton deformation of (positions, ray angles, weights)
// towards the requested forces/lengths.  Throws DegenerateError when the
// Jacobian loses rank.
WeightedGraph deform(const WeightedGraph& g, const DeformTargets& targets,
                     double tol = 1e-12, int max_iter = 20);

// Pre-embeddedness: every pair of edges/rays without a common endpoint at
// distance > 2, and angles at shared endpoints > 60 degrees.
struct PreEmbeddedReport {
    bool pre_embedded = false;
    double min_pair_distance = 0.0;  // over pairs without common endpoint
    double min_angle = 0.0;          // radians, at common endpoints
};

PreEmbeddedReport pre_embedded(const WeightedGraph& g);

// --- JSON I/O ---------------------------------------------------------
WeightedGraph load_graph(const std::string& path);
WeightedGraph parse_graph(const std::string& json_text);
std::string graph_to_json(const WeightedGraph& g);
void save_graph(const WeightedGraph& g, const std::string& path);

}  // namespace dpw
