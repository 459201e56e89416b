#pragma once

#include "matsim/element_table.hpp"
#include "matsim/structure.hpp"
#include "matsim/voronoi.hpp"

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

namespace matsim {

using OrbitalVector = Eigen::Matrix<double, kOrbitalCount, 1>;
// Column 0 holds the central atom's orbital indicator; columns 1..32 the
// environment block.
using LocalOFMMatrix = Eigen::Matrix<double, kOrbitalCount, kOrbitalCount + 1>;

inline constexpr int kOfmLength = kOrbitalCount * (kOrbitalCount + 1); // 1056

struct LocalOFM {
    int central_site_index = 0;
    LocalOFMMatrix matrix = LocalOFMMatrix::Zero();

    auto central() const { return matrix.col(0); }
    auto environment() const { return matrix.rightCols<kOrbitalCount>(); }
};

enum class DescriptorKind { Ofm, CmSpectrum, CmSorted };

std::string_view to_string(DescriptorKind kind);
// Accepts the CLI spellings "ofm", "cm-spectrum", "cm-sorted".
DescriptorKind parse_descriptor_kind(std::string_view name);

struct Descriptor {
    DescriptorKind kind = DescriptorKind::Ofm;
    // zero-padded size for CM kinds (n for spectrum, n*n entries for sorted)
    int pad_len = 0;
    Eigen::VectorXd values;
};

// 1 at every dictionary label present in the element's valence configuration.
OrbitalVector orbital_onehot(std::string_view element);

LocalOFM local_ofm(const CrystalStructure& s, const NeighborShell& shell);

// Mean of the local OFMs of all sites, flattened row-major (1056 entries).
Descriptor material_ofm(const CrystalStructure& s, const VoronoiOptions& options = {});
Descriptor material_ofm(const CrystalStructure& s, const std::vector<NeighborShell>& shells);

// C_ii = 0.5 Z^2.4, C_ij = Z_i Z_j / d_min(i, j) with minimum-image distances.
// Throws DegenerateGeometryError for coincident sites.
Eigen::MatrixXd coulomb_matrix(const CrystalStructure& s);

// Eigenvalues sorted by descending magnitude, zero-padded to pad_len.
Descriptor cm_eigenspectrum(const Eigen::MatrixXd& cm, int pad_len);

// Rows/columns permuted so row 2-norms are non-increasing, flattened
// row-major into a pad_len x pad_len zero-padded block.
Descriptor cm_sorted(const Eigen::MatrixXd& cm, int pad_len);

// Featurizes a whole dataset; for CM kinds a non-positive pad_len means the
// dataset's maximum site count. Output rows follow input order.
struct FeatureMatrix {
    DescriptorKind kind = DescriptorKind::Ofm;
    int pad_len = 0;
    std::vector<std::string> ids;
    Eigen::MatrixXd values; // one descriptor per row
};

FeatureMatrix featurize(const std::vector<CrystalStructure>& dataset, DescriptorKind kind, int pad_len = 0);

} // namespace matsim
