//==============================================================================
//  trajectory.hpp
//
//  Time-sampled evolution: ordered sample times in [0, T] with one spatial
//  frame per time.  Mixed space-time norms integrate over `times` with
//  trapezoid weights, matching the propagator's uniform stepping.
//==============================================================================
#pragma once

#include <vector>

#include "schrec/grid.hpp"

namespace schrec {

struct Trajectory {
    Grid grid;
    std::vector<double> times;   // strictly increasing, first 0, last T
    std::vector<Field> frames;   // spatial, one per time, shared grid
};

}  // namespace schrec
