#pragma once
#include <string>

#include "dpw/newton.hpp"

namespace dpw {

// Solve-state snapshot (UTF-8 JSON): the deformed graph, t, the truncation
// (N, rho), every parameter loop of the solution, residual norms and the
// iteration log.  Loading reproduces the solution up to float round-trip.
struct LoadedState {
    WeightedGraph g;
    Params x;
    double t = 0.0;
    double residual = 0.0;  // |E|_inf recorded at save time
};

std::string state_to_json(const SolveResult& sr);
void save_state(const SolveResult& sr, const std::string& path);
LoadedState parse_state(const std::string& json_text);
LoadedState load_state(const std::string& path);

}  // namespace dpw
