#pragma once

#include "dwlab/grid.hpp"

#include <vector>

namespace dwlab {

struct SorOptions {
    double omega = 1.9;       // relaxation factor
    double tol = 1e-8;        // max update per sweep and harmonicity target
    long max_sweeps = 100000;
    bool parallel = true;     // red-black OpenMP kernel vs serial reference
};

struct SorResult {
    std::vector<double> u;    // full lattice; boundary cells hold their data
    long sweeps = 0;
    double last_max_update = 0.0;
    double harmonicity_residual = 0.0; // max |u - mean4| over interior cells
    bool converged = false;
};

// 5-point discrete Laplace with Dirichlet data (1 on target-labeled boundary
// cells, 0 elsewhere), successive over-relaxation in red-black order. The
// parallel and serial kernels perform identical arithmetic: within a color
// every update reads only the other color, so results are bitwise equal for
// any thread count.
// `initial` optionally warm-starts the interior (e.g. a prolonged coarse
// solution); the fixed point and the convergence criteria are unchanged.
SorResult solve_dirichlet(const GridRegion& region, const std::vector<std::uint8_t>& target_data,
                          const SorOptions& opts = {},
                          const std::vector<double>* initial = nullptr);

// One red-black sweep over the interior; returns the max |update|. Exposed
// for the kernel benchmark.
double sor_sweep_serial(const GridRegion& region, std::vector<double>& u, double omega);
double sor_sweep_parallel(const GridRegion& region, std::vector<double>& u, double omega);

double harmonicity_residual(const GridRegion& region, const std::vector<double>& u);

} // namespace dwlab
