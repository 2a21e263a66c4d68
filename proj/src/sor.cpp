#include "dwlab/sor.hpp"

#include "dwlab/error.hpp"

#include <algorithm>
#include <cmath>

namespace dwlab {

namespace {

template <bool Parallel>
double sweep(const GridRegion& g, std::vector<double>& u, double omega) {
    const int m = g.m;
    const int nx = g.nx();
    double max_update = 0.0;
    for (int color = 0; color < 2; ++color) {
#ifdef _OPENMP
#pragma omp parallel for reduction(max : max_update) schedule(static) if (Parallel)
#endif
        for (int j = -m; j <= m; ++j) {
            const std::size_t row = std::size_t(j + m) * std::size_t(nx);
            // first i of this color in the row: parity of (i + j)
            int i = -m + ((((-m + j) % 2) + 2) % 2 == color ? 0 : 1);
            for (; i <= m; i += 2) {
                const std::size_t idx = row + std::size_t(i + m);
                if (g.cells[idx] != GridRegion::Interior) continue;
                const double mean =
                    0.25 * (u[idx - 1] + u[idx + 1] + u[idx - nx] + u[idx + nx]);
                const double delta = omega * (mean - u[idx]);
                u[idx] += delta;
                max_update = std::max(max_update, std::abs(delta));
            }
        }
    }
    return max_update;
}

} // namespace

double sor_sweep_serial(const GridRegion& g, std::vector<double>& u, double omega) {
    return sweep<false>(g, u, omega);
}

double sor_sweep_parallel(const GridRegion& g, std::vector<double>& u, double omega) {
    return sweep<true>(g, u, omega);
}

double harmonicity_residual(const GridRegion& g, const std::vector<double>& u) {
    const int m = g.m;
    const int nx = g.nx();
    double worst = 0.0;
#ifdef _OPENMP
#pragma omp parallel for reduction(max : worst) schedule(static)
#endif
    for (int j = -m; j <= m; ++j) {
        const std::size_t row = std::size_t(j + m) * std::size_t(nx);
        for (int i = -m; i <= m; ++i) {
            const std::size_t idx = row + std::size_t(i + m);
            if (g.cells[idx] != GridRegion::Interior) continue;
            const double mean = 0.25 * (u[idx - 1] + u[idx + 1] + u[idx - nx] + u[idx + nx]);
            worst = std::max(worst, std::abs(u[idx] - mean));
        }
    }
    return worst;
}

SorResult solve_dirichlet(const GridRegion& g, const std::vector<std::uint8_t>& target_data,
                          const SorOptions& opts, const std::vector<double>* initial) {
    if (target_data.size() != g.cells.size())
        throw InvalidInput("sor: target data size does not match the lattice");

    SorResult res;
    res.u.assign(g.cells.size(), 0.0);

    long targets = 0, boundary = 0;
    for (std::size_t k = 0; k < g.cells.size(); ++k) {
        if (g.cells[k] != GridRegion::Boundary) continue;
        ++boundary;
        if (target_data[k]) {
            res.u[k] = 1.0;
            ++targets;
        }
    }
    // start from the boundary mean (constant data converges immediately) or
    // from a caller-provided field
    const double mean0 = boundary ? double(targets) / double(boundary) : 0.0;
    if (initial && initial->size() == res.u.size()) {
        for (std::size_t k = 0; k < g.cells.size(); ++k)
            if (g.cells[k] == GridRegion::Interior) res.u[k] = (*initial)[k];
    } else {
        for (std::size_t k = 0; k < g.cells.size(); ++k)
            if (g.cells[k] == GridRegion::Interior) res.u[k] = mean0;
    }

    double update_tol = opts.tol * 0.5;
    while (res.sweeps < opts.max_sweeps) {
        const double upd = opts.parallel ? sor_sweep_parallel(g, res.u, opts.omega)
                                         : sor_sweep_serial(g, res.u, opts.omega);
        ++res.sweeps;
        res.last_max_update = upd;
        if (upd < update_tol) {
            res.harmonicity_residual = harmonicity_residual(g, res.u);
            if (res.harmonicity_residual < opts.tol && upd < opts.tol) {
                res.converged = true;
                return res;
            }
            update_tol *= 0.5; // tighten until the residual target is met
        }
    }
    res.harmonicity_residual = harmonicity_residual(g, res.u);
    throw SolverError("sor: no convergence within the sweep budget");
}

} // namespace dwlab
