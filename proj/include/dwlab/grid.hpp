#pragma once

#include "dwlab/complex_ext.hpp"
#include "dwlab/selfmap.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dwlab {

// Closed set removed from the base domain. Curves (slits, circles, segments)
// are thickened to one cell so they have positive hitting probability on the
// grid; area sets keep their exact membership.
struct Obstacle {
    enum class Kind { ClosedDisk, RadialSlit, Circle, Segment, Preimage };

    Kind kind = Kind::ClosedDisk;
    Complex center{0.0, 0.0};
    double radius = 0.0;
    Complex a{0.0, 0.0}, b{0.0, 0.0}; // segment / slit endpoints
    std::optional<SelfMap> map;       // preimage obstacle
    Complex image_center{0.0, 0.0};
    double image_radius = 0.0;

    static Obstacle closed_disk(Complex c, double r);
    // [r0 * zeta, zeta) toward the boundary point zeta (|zeta| = 1)
    static Obstacle radial_slit(Complex zeta, double r0);
    static Obstacle circle(Complex c, double r);
    static Obstacle segment(Complex a, Complex b);
    // cells c with phi(c) within h/2 of the closed disk D(image_center, image_radius)
    static Obstacle preimage_of_disk(SelfMap phi, Complex c, double r);

    // distance to the closed set (0 inside); for preimages, measured in the
    // image plane
    double feature_distance(Complex z) const;
    bool removes(Complex z, double h) const;
};

// Boundary feature a grid boundary cell touches.
enum : std::uint8_t {
    kFeatureCircle = 0, // unit circle (base boundary)
    kFeatureLevel = 1,  // free boundary of a sublevel region inside the disk
    kFeatureObstacleBase = 2,
};

struct RegionSpec {
    enum class Base { UnitDisk, SublevelComponent };

    Base base = Base::UnitDisk;
    // sublevel: { z in D : rho(phi_n(z), p) < t }, component of the seed
    std::optional<SelfMap> level_map;
    long level_n = 1;
    Complex level_p{0.0, 0.0};
    double level_t = 1.0;

    std::vector<Obstacle> obstacles;
    Complex seed{0.0, 0.0};

    static RegionSpec unit_disk(Complex seed = {0.0, 0.0});
    static RegionSpec sublevel(SelfMap map, long n, Complex p, double t);
};

// Square lattice of spacing h on [-mh, mh]^2 with the 4-connected component
// of the seed as interior. Every interior cell has all four neighbours
// classified (interior or labeled boundary).
struct GridRegion {
    enum Cell : std::uint8_t { Exterior = 0, Interior = 1, Boundary = 2 };

    double h = 1.0 / 256.0;
    int m = 0; // index range [-m, m] both axes
    std::vector<std::uint8_t> cells;
    std::vector<std::uint8_t> feature; // feature id of boundary cells
    Complex seed{0.0, 0.0};
    int component_id = 1;
    long interior_count = 0;
    double max_interior_modulus = 0.0;
    RegionSpec spec;

    int nx() const { return 2 * m + 1; }
    std::size_t index(int i, int j) const {
        return std::size_t(j + m) * std::size_t(nx()) + std::size_t(i + m);
    }
    bool in_range(int i, int j) const { return i >= -m && i <= m && j >= -m && j <= m; }
    Complex point(int i, int j) const { return Complex(i * h, j * h); }
    Cell cell(int i, int j) const { return Cell(cells[index(i, j)]); }
    long cell_of(Complex z, int& i, int& j) const; // nearest lattice cell

    long count_boundary(std::uint8_t feature_id) const;
};

// Rasterizes the spec at lattice spacing h (one of 1/128, 1/256, 1/512).
// Throws InvalidInput when the seed is outside or the region is empty.
GridRegion build_grid_region(const RegionSpec& spec, double h);

// Same construction from a precomputed membership bitmap (index layout of
// GridRegion at spacing h). Labels come from the spec's feature geometry.
GridRegion build_region_from_bitmap(const std::vector<std::uint8_t>& inside,
                                    const RegionSpec& spec, double h);

// Connected components of a membership bitmap (diagnostic).
long count_components(const std::vector<std::uint8_t>& inside, double h);

// Membership of the spec at a point (before the component restriction).
bool spec_contains(const RegionSpec& spec, Complex z, double h);

// P5 bitmap: 0 exterior, 128 boundary, 255 interior.
void write_pgm(const GridRegion& region, const std::string& path);

} // namespace dwlab
