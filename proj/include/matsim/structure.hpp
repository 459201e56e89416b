#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace matsim {

using Vec3 = Eigen::Vector3d;
using Offset3 = Eigen::Vector3i;
// Rows are lattice vectors, in Angstrom.
using Lattice = Eigen::Matrix3d;
// One Cartesian position per row.
using Positions = Eigen::Matrix<double, Eigen::Dynamic, 3>;

struct Site {
    std::string element;
    int atomic_number = 0;
    Vec3 frac = Vec3::Zero();
};

struct CrystalStructure {
    std::string id;
    Lattice lattice = Lattice::Identity();
    std::vector<Site> sites;
    std::optional<double> formation_energy;

    std::size_t size() const noexcept { return sites.size(); }
};

// Smallest |det(lattice)| accepted, in cubic Angstrom.
inline constexpr double kMinCellVolume = 1e-8;

// Wraps each component into [0, 1).
Vec3 wrap_fractional(const Vec3& frac);

// Validates and normalizes a structure: resolves atomic numbers from the
// element table, wraps fractional coordinates and checks the lattice.
// Throws SingularLatticeError, UnknownElementError, ParseError (no sites).
CrystalStructure make_structure(std::string id, const Lattice& lattice,
                                const std::vector<std::pair<std::string, Vec3>>& sites,
                                std::optional<double> formation_energy = std::nullopt);

// Parses the structure JSON document
//   { "id": str, "lattice": [[f;3];3], "sites": [{"element": str, "frac": [f;3]}],
//     "formation_energy": f|null }
CrystalStructure parse_structure(std::string_view content);
CrystalStructure load_structure(const std::filesystem::path& path);
std::string structure_to_json(const CrystalStructure& s);

Positions cartesian_coords(const CrystalStructure& s);

struct PeriodicImage {
    int site = 0;
    Offset3 offset = Offset3::Zero();
    Vec3 position = Vec3::Zero();
};

// Every image with a nonzero cell offset whose position lies within
// `cutoff` of some home-cell site. Ordered by site index, then offset
// (lexicographic). Throws DomainError for cutoff <= 0.
std::vector<PeriodicImage> periodic_images(const CrystalStructure& s, double cutoff);

// Every image (home-cell sites included) within `cutoff` of `center`, except
// the image coinciding with `center` itself. Same ordering as above.
std::vector<PeriodicImage> images_within(const CrystalStructure& s, const Vec3& center,
                                         double cutoff);

// Per-axis bound on |offset| needed to reach every image within `radius`
// of a point in the home cell.
Offset3 offset_bounds(const Lattice& lattice, double radius);

// Shortest distance between site i and any periodic image of site j
// (for i == j, the shortest lattice translation).
double min_image_distance(const CrystalStructure& s, std::size_t i, std::size_t j);

struct ManifestEntry {
    std::string id;
    std::filesystem::path path;
    std::optional<double> formation_energy;
};

// CSV with header `id,path,formation_energy`; relative paths resolve against
// the manifest's directory. An empty energy field means "unlabelled".
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& manifest);

// Loads every structure of a manifest in row order; a manifest energy takes
// precedence over the one stored in the structure file.
std::vector<CrystalStructure> load_dataset(const std::filesystem::path& manifest);

} // namespace matsim
