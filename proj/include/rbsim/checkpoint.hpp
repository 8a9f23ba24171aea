#pragma once

#include <filesystem>
#include <string>

#include "rbsim/grid.hpp"
#include "rbsim/solver.hpp"

namespace rbsim {

/// Spectral dump of a solver state.
///
///   # rbsim-checkpoint version=1
///   # n=128 box_length=6.2831853071795862 t=0.5 symbol=log:mu1=1
///   m1,m2,omega_re,omega_im,theta_re,theta_im
///   ...one row per lattice mode, 17 significant digits
struct Checkpoint {
    int n = 0;
    double box_length = 0.0;
    double t = 0.0;
    std::string symbol;
    SolverState state;
};

constexpr int checkpoint_version = 1;

void write_checkpoint(const std::filesystem::path& path, const Grid2D& grid,
                      const SolverState& state, const std::string& symbol_spec);

Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace rbsim
