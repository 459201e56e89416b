#pragma once

#include "matsim/structure.hpp"

#include <span>
#include <string>
#include <vector>

namespace matsim {

// One face of a central atom's Voronoi polyhedron.
struct NeighborRecord {
    std::string neighbor_element;
    int neighbor_site_index = 0;
    Offset3 image_offset = Offset3::Zero();
    double distance = 0.0;    // r_k, Angstrom
    double solid_angle = 0.0; // theta_k, steradian
};

struct NeighborShell {
    int central_site_index = 0;
    // ordered by neighbor site index, then image offset
    std::vector<NeighborRecord> records;
    double theta_max = 0.0;

    // theta_k / theta_max
    double weight(std::size_t k) const { return records[k].solid_angle / theta_max; }
    double total_solid_angle() const;
};

struct VoronoiOptions {
    double initial_cutoff = 12.0;
    double max_cutoff = 48.0;
    // faces subtending less than this are dropped
    double min_solid_angle = 1e-8;
    // two atoms closer than this make the geometry degenerate
    double min_separation = 1e-6;
};

// Solid angle subtended at the origin by triangle (a, b, c), using the
// Van Oosterom-Strackee formula. Always nonnegative.
double triangle_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c);

// Solid angle subtended at the origin by a planar convex polygon with
// vertices in cyclic order, summed over a fan from the vertex centroid.
double polygon_solid_angle(std::span<const Vec3> vertices);

// Voronoi cell of one site against the periodic images of all sites,
// built by clipping a bounding cube with perpendicular-bisector half-spaces.
// The candidate cutoff starts at options.initial_cutoff and doubles until the
// cell is provably closed. Throws OpenCellError, DegenerateGeometryError.
NeighborShell neighbor_shell(const CrystalStructure& s, int site_index, const VoronoiOptions& options = {});

std::vector<NeighborShell> neighbor_shells(const CrystalStructure& s, const VoronoiOptions& options = {});

// Debug dump: `neighbor_index,element,r_k,theta_k,w_k`.
std::string neighbor_shell_csv(const NeighborShell& shell);

} // namespace matsim
