#pragma once

#include "epb/grid.hpp"

namespace epb {

/// One time level of the coupled system: ion density, velocity, potential.
/// phi is the Poisson solution consistent with rho to the solver tolerance.
struct FluidState {
    double time = 0.0;
    Field rho;
    Field u;
    Field phi;
};

}  // namespace epb
