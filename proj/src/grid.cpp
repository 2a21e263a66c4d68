#include "dwlab/grid.hpp"

#include "dwlab/error.hpp"
#include "dwlab/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dwlab {

Obstacle Obstacle::closed_disk(Complex c, double r) {
    if (!(r > 0.0)) throw InvalidInput("obstacle: disk radius must be positive");
    Obstacle o;
    o.kind = Kind::ClosedDisk;
    o.center = c;
    o.radius = r;
    return o;
}

Obstacle Obstacle::radial_slit(Complex zeta, double r0) {
    if (std::abs(std::abs(zeta) - 1.0) > 1e-9)
        throw InvalidInput("obstacle: slit direction must be a unit vector");
    if (!(r0 > 0.0 && r0 < 1.0)) throw InvalidInput("obstacle: slit base radius must be in (0,1)");
    Obstacle o;
    o.kind = Kind::RadialSlit;
    o.a = r0 * zeta;
    o.b = zeta;
    return o;
}

Obstacle Obstacle::circle(Complex c, double r) {
    if (!(r > 0.0)) throw InvalidInput("obstacle: circle radius must be positive");
    Obstacle o;
    o.kind = Kind::Circle;
    o.center = c;
    o.radius = r;
    return o;
}

Obstacle Obstacle::segment(Complex a, Complex b) {
    Obstacle o;
    o.kind = Kind::Segment;
    o.a = a;
    o.b = b;
    return o;
}

Obstacle Obstacle::preimage_of_disk(SelfMap phi, Complex c, double r) {
    if (!(r > 0.0)) throw InvalidInput("obstacle: preimage target radius must be positive");
    Obstacle o;
    o.kind = Kind::Preimage;
    o.map = std::move(phi);
    o.image_center = c;
    o.image_radius = r;
    return o;
}

namespace {

double segment_distance(Complex z, Complex a, Complex b) {
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(z - a);
    double t = ((z - a) * std::conj(ab)).real() / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (a + t * ab));
}

} // namespace

double Obstacle::feature_distance(Complex z) const {
    switch (kind) {
    case Kind::ClosedDisk: return std::max(0.0, std::abs(z - center) - radius);
    case Kind::Circle: return std::abs(std::abs(z - center) - radius);
    case Kind::RadialSlit:
    case Kind::Segment: return segment_distance(z, a, b);
    case Kind::Preimage: {
        Complex w;
        try {
            w = map->eval(z);
        } catch (const InvalidInput&) {
            return 1e9; // pole cell: not part of the preimage
        }
        if (!is_finite_number(w)) return 1e9;
        return std::max(0.0, std::abs(w - image_center) - image_radius);
    }
    }
    return 1e9;
}

bool Obstacle::removes(Complex z, double h) const {
    switch (kind) {
    case Kind::ClosedDisk: return std::abs(z - center) <= radius;
    case Kind::Circle:
    case Kind::RadialSlit:
    case Kind::Segment: return feature_distance(z) <= 0.5 * h; // one-cell thickening
    case Kind::Preimage: return feature_distance(z) <= 0.5 * h;
    }
    return false;
}

RegionSpec RegionSpec::unit_disk(Complex seed) {
    RegionSpec s;
    s.seed = seed;
    return s;
}

RegionSpec RegionSpec::sublevel(SelfMap map, long n, Complex p, double t) {
    RegionSpec s;
    s.base = Base::SublevelComponent;
    s.level_map = std::move(map);
    s.level_n = n;
    s.level_p = p;
    s.level_t = t;
    s.seed = p;
    return s;
}

long GridRegion::cell_of(Complex z, int& i, int& j) const {
    i = int(std::lround(z.real() / h));
    j = int(std::lround(z.imag() / h));
    if (!in_range(i, j)) return -1;
    return long(index(i, j));
}

long GridRegion::count_boundary(std::uint8_t feature_id) const {
    long n = 0;
    for (std::size_t k = 0; k < cells.size(); ++k)
        if (cells[k] == Boundary && feature[k] == feature_id) ++n;
    return n;
}

namespace {

bool valid_spacing(double h) {
    for (double ref : {1.0 / 128.0, 1.0 / 256.0, 1.0 / 512.0})
        if (std::abs(h - ref) < 1e-15) return true;
    return false;
}

// phi_n at a cell for sublevel membership; nullopt when the orbit leaves the
// disk, hits a pole, or goes non-finite.
std::optional<Complex> iterate_in_disk(const SelfMap& map, Complex z, long n) {
    if (auto closed = map.closed_iterate(n, z)) {
        if (is_finite_number(*closed) && std::abs(*closed) < 1.0) return closed;
        return std::nullopt;
    }
    for (long k = 0; k < n; ++k) {
        try {
            z = map.eval(z);
        } catch (const InvalidInput&) {
            return std::nullopt;
        }
        if (!is_finite_number(z) || std::abs(z) >= 1.0) return std::nullopt;
    }
    return z;
}

} // namespace

bool spec_contains(const RegionSpec& spec, Complex z, double h) {
    if (std::abs(z) >= 1.0) return false;
    if (spec.base == RegionSpec::Base::SublevelComponent) {
        const auto w = iterate_in_disk(*spec.level_map, z, spec.level_n);
        if (!w) return false;
        if (hyp_dist_disk_raw(*w, spec.level_p) >= spec.level_t) return false;
    }
    for (const Obstacle& o : spec.obstacles)
        if (o.removes(z, h)) return false;
    return true;
}

GridRegion build_grid_region(const RegionSpec& spec, double h) {
    if (!valid_spacing(h))
        throw InvalidInput("grid: spacing must be one of 1/128, 1/256, 1/512");
    GridRegion probe;
    probe.h = h;
    probe.m = int(std::lround(1.0 / h)) + 2;
    const int n = probe.nx();
    std::vector<std::uint8_t> inside(std::size_t(n) * std::size_t(n), 0);
#pragma omp parallel for schedule(dynamic, 8)
    for (int j = -probe.m; j <= probe.m; ++j)
        for (int i = -probe.m; i <= probe.m; ++i)
            inside[probe.index(i, j)] = spec_contains(spec, probe.point(i, j), h) ? 1 : 0;
    return build_region_from_bitmap(inside, spec, h);
}

GridRegion build_region_from_bitmap(const std::vector<std::uint8_t>& inside,
                                    const RegionSpec& spec, double h) {
    if (!valid_spacing(h))
        throw InvalidInput("grid: spacing must be one of 1/128, 1/256, 1/512");
    GridRegion g;
    g.h = h;
    g.m = int(std::lround(1.0 / h)) + 2;
    g.spec = spec;
    g.seed = spec.seed;
    const int n = g.nx();
    if (inside.size() != std::size_t(n) * std::size_t(n))
        throw InvalidInput("grid: bitmap size does not match the lattice");
    g.cells.assign(std::size_t(n) * std::size_t(n), GridRegion::Exterior);
    g.feature.assign(g.cells.size(), 0);

    int si, sj;
    if (g.cell_of(spec.seed, si, sj) < 0 || !inside[g.index(si, sj)])
        throw InvalidInput("grid: seed cell is outside the region");

    // flood fill, 4-connected
    std::vector<std::pair<int, int>> queue;
    queue.reserve(1024);
    queue.emplace_back(si, sj);
    g.cells[g.index(si, sj)] = GridRegion::Interior;
    const int di[4] = {1, -1, 0, 0};
    const int dj[4] = {0, 0, 1, -1};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto [ci, cj] = queue[head];
        for (int d = 0; d < 4; ++d) {
            const int ni = ci + di[d], nj = cj + dj[d];
            if (!g.in_range(ni, nj)) continue;
            const std::size_t idx = g.index(ni, nj);
            if (g.cells[idx] == GridRegion::Interior || !inside[idx]) continue;
            g.cells[idx] = GridRegion::Interior;
            queue.emplace_back(ni, nj);
        }
    }
    g.interior_count = long(queue.size());
    if (g.interior_count == 0) throw InvalidInput("grid: empty region");

    for (const auto& [ci, cj] : queue)
        g.max_interior_modulus = std::max(g.max_interior_modulus, std::abs(g.point(ci, cj)));

    // boundary-adjacent cells, labeled by the nearest spec feature within h
    // (near-ties resolved obstacle > level > circle, i.e. toward the usual
    // target sets)
    for (const auto& [ci, cj] : queue) {
        for (int d = 0; d < 4; ++d) {
            const int ni = ci + di[d], nj = cj + dj[d];
            if (!g.in_range(ni, nj)) throw InvalidInput("grid: region touches the lattice edge");
            const std::size_t idx = g.index(ni, nj);
            if (g.cells[idx] != GridRegion::Exterior) continue;
            g.cells[idx] = GridRegion::Boundary;
            const Complex z = g.point(ni, nj);

            double best_dist = std::abs(std::abs(z) - 1.0);
            std::uint8_t best = kFeatureCircle;
            if (spec.base == RegionSpec::Base::SublevelComponent && std::abs(z) < 1.0 - 0.75 * h) {
                best = kFeatureLevel;
                best_dist = 0.0; // excluded by the level set itself
            }
            for (std::size_t ob = 0; ob < spec.obstacles.size(); ++ob) {
                const double dist = spec.obstacles[ob].feature_distance(z);
                if (dist <= std::min(best_dist + 0.25 * h, double(h))) {
                    best = std::uint8_t(kFeatureObstacleBase + ob);
                    best_dist = dist;
                }
            }
            g.feature[idx] = best;
        }
    }
    return g;
}

long count_components(const std::vector<std::uint8_t>& inside, double h) {
    const int m = int(std::lround(1.0 / h)) + 2;
    const int n = 2 * m + 1;
    if (inside.size() != std::size_t(n) * std::size_t(n))
        throw InvalidInput("grid: bitmap size does not match the lattice");
    std::vector<std::uint8_t> seen(inside.size(), 0);
    std::vector<std::size_t> queue;
    long components = 0;
    for (std::size_t start = 0; start < inside.size(); ++start) {
        if (!inside[start] || seen[start]) continue;
        ++components;
        queue.clear();
        queue.push_back(start);
        seen[start] = 1;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::size_t k = queue[head];
            const int i = int(k % std::size_t(n)) - m;
            const int j = int(k / std::size_t(n)) - m;
            const int di[4] = {1, -1, 0, 0};
            const int dj[4] = {0, 0, 1, -1};
            for (int d = 0; d < 4; ++d) {
                const int ni = i + di[d], nj = j + dj[d];
                if (ni < -m || ni > m || nj < -m || nj > m) continue;
                const std::size_t nk = std::size_t(nj + m) * std::size_t(n) + std::size_t(ni + m);
                if (!inside[nk] || seen[nk]) continue;
                seen[nk] = 1;
                queue.push_back(nk);
            }
        }
    }
    return components;
}

void write_pgm(const GridRegion& region, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw SolverError("pgm: cannot open '" + path + "' for writing");
    const int n = region.nx();
    std::fprintf(f, "P5\n%d %d\n255\n", n, n);
    std::vector<unsigned char> row(static_cast<std::size_t>(n));
    for (int j = region.m; j >= -region.m; --j) { // top row first
        for (int i = -region.m; i <= region.m; ++i) {
            const auto c = region.cell(i, j);
            row[std::size_t(i + region.m)] =
                c == GridRegion::Interior ? 255 : (c == GridRegion::Boundary ? 128 : 0);
        }
        std::fwrite(row.data(), 1, row.size(), f);
    }
    std::fclose(f);
}

} // namespace dwlab
