#pragma once
// Triangulated immersion of a solved surface.  The noded sphere is covered by
// log-polar patches (one per vertex chart and edge chart), annular collar
// patches around every neck, and annular patches around the ray ends.  The
// holomorphic frame is transported along pole-free spoke/ring nets, factored
// pointwise, and the immersion point and normal are read off at lambda = 1.
// Output is a Wavefront OBJ with one group per patch, in the coordinates in
// which the central vertex sphere of the base chart is the unit sphere.

#include "dpw/newton.hpp"
#include "dpw/sym.hpp"

#include <string>

namespace dpw {

struct MeshOptions {
    int res = 32;                // angular samples per full ring (rounded even)
    double r_in = 0.02;          // inner radius of the sphere-chart grids
    double r_out = 50.0;         // outer truncation radius
    int rings_per_decade = 10;   // radial density of the sphere-chart grids
    double ray_clear = 0.2;      // notch radius around ray points (grows with
                                 // the lambda-spread of the attachment point)
    int deep_degree = 48;        // factorization degree for neck/ray patches
    IwasawaOptions iwasawa;
    OdeOptions ode;
};

struct MeshStats {
    int n_points = 0;
    int n_faces = 0;
    int n_patches = 0;
    double max_dropped = 0.0;    // worst factorization tail drop
    double max_defect = 0.0;     // worst non-unitarity at lambda = 1
    // worst gap of the mirror symmetry f(1/conj(z)) = R3 f(z) over sampled
    // mirror pairs (R3 = reflection in the horizontal plane)
    double sigma_gap = 0.0;
    int sigma_pairs = 0;
    std::string worst_dropped_group;  // patch holding the worst tail drop
    std::string worst_sigma_group;    // patch holding the worst mirror gap
    std::map<int, Vec3> sphere_center;     // vertex patch centroid
    std::map<int, double> sphere_rad_dev;  // max | |f - center| - mean radius |
    std::map<OKey, double> neck_waist;     // min neck ring radius, canonical edges
    std::map<int, double> ray_weight;      // end weight 8 pi t kappa(1) ahat(1)
};

// Triangulates the surface described by a solved parameter set (t > 0) and
// writes it to `path`.  Throws std::invalid_argument when t <= 0 and
// std::runtime_error when the file cannot be written.
MeshStats write_mesh(const WeightedGraph& g, const Params& x, double t,
                     const std::string& path, const MeshOptions& opt = {});

inline MeshStats write_mesh(const SolveResult& sr, const std::string& path,
                            const MeshOptions& opt = {}) {
    return write_mesh(sr.g, sr.x, sr.t, path, opt);
}

} // namespace dpw
