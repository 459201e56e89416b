#include "matsim/descriptors.hpp"

#include "matsim/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace matsim {

std::string_view to_string(DescriptorKind kind)
{
    switch (kind) {
    case DescriptorKind::Ofm: return "ofm";
    case DescriptorKind::CmSpectrum: return "cm-spectrum";
    case DescriptorKind::CmSorted: return "cm-sorted";
    }
    return "unknown";
}

DescriptorKind parse_descriptor_kind(std::string_view name)
{
    if (name == "ofm") return DescriptorKind::Ofm;
    if (name == "cm-spectrum") return DescriptorKind::CmSpectrum;
    if (name == "cm-sorted") return DescriptorKind::CmSorted;
    throw DomainError("unknown descriptor '" + std::string(name) + "'");
}

OrbitalVector orbital_onehot(std::string_view element)
{
    OrbitalVector v = OrbitalVector::Zero();
    for (int idx : valence_orbitals(element_by_symbol(element))) v[idx] = 1.0;
    return v;
}

LocalOFM local_ofm(const CrystalStructure& s, const NeighborShell& shell)
{
    const auto& central = s.sites.at(static_cast<std::size_t>(shell.central_site_index));
    const OrbitalVector o_central = orbital_onehot(central.element);

    OrbitalVector o_env = OrbitalVector::Zero();
    for (std::size_t k = 0; k < shell.records.size(); ++k) {
        const auto& r = shell.records[k];
        o_env += orbital_onehot(r.neighbor_element) * (shell.weight(k) / r.distance);
    }

    LocalOFM out;
    out.central_site_index = shell.central_site_index;
    out.matrix.col(0) = o_central;
    out.matrix.rightCols<kOrbitalCount>() = o_central * o_env.transpose();
    return out;
}

Descriptor material_ofm(const CrystalStructure& s, const std::vector<NeighborShell>& shells)
{
    if (shells.size() != s.size())
        throw DimensionMismatchError("material_ofm: need one neighbor shell per site");
    LocalOFMMatrix mean = LocalOFMMatrix::Zero();
    for (const auto& shell : shells) mean += local_ofm(s, shell).matrix;
    mean /= static_cast<double>(shells.size());

    Descriptor d;
    d.kind = DescriptorKind::Ofm;
    d.values.resize(kOfmLength);
    // row-major: row = central orbital, column 0 first
    Eigen::Map<Eigen::Matrix<double, kOrbitalCount, kOrbitalCount + 1, Eigen::RowMajor>>(d.values.data()) = mean;
    return d;
}

Descriptor material_ofm(const CrystalStructure& s, const VoronoiOptions& options)
{
    return material_ofm(s, neighbor_shells(s, options));
}

Eigen::MatrixXd coulomb_matrix(const CrystalStructure& s)
{
    const auto n = static_cast<Eigen::Index>(s.size());
    Eigen::MatrixXd cm(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double zi = s.sites[static_cast<std::size_t>(i)].atomic_number;
        cm(i, i) = 0.5 * std::pow(zi, 2.4);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double zj = s.sites[static_cast<std::size_t>(j)].atomic_number;
            const double d = min_image_distance(s, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            if (d < 1e-6)
                throw DegenerateGeometryError("structure '" + s.id + "': sites " + std::to_string(i) + " and " +
                                              std::to_string(j) + " coincide");
            cm(i, j) = cm(j, i) = zi * zj / d;
        }
    }
    return cm;
}

namespace {

void check_pad(const Eigen::MatrixXd& cm, int pad_len)
{
    if (cm.rows() != cm.cols()) throw DimensionMismatchError("Coulomb matrix must be square");
    if (pad_len < cm.rows())
        throw DomainError("pad_len " + std::to_string(pad_len) + " smaller than matrix size " +
                          std::to_string(cm.rows()));
}

} // namespace

Descriptor cm_eigenspectrum(const Eigen::MatrixXd& cm, int pad_len)
{
    check_pad(cm, pad_len);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cm, Eigen::EigenvaluesOnly);
    std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + cm.rows());
    std::stable_sort(ev.begin(), ev.end(), [](double a, double b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
        return a > b;
    });
    Descriptor d;
    d.kind = DescriptorKind::CmSpectrum;
    d.pad_len = pad_len;
    d.values = Eigen::VectorXd::Zero(pad_len);
    for (std::size_t i = 0; i < ev.size(); ++i) d.values[static_cast<Eigen::Index>(i)] = ev[i];
    return d;
}

Descriptor cm_sorted(const Eigen::MatrixXd& cm, int pad_len)
{
    check_pad(cm, pad_len);
    const Eigen::VectorXd norms = cm.rowwise().norm();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(cm.rows()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return norms[a] > norms[b]; });

    Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(pad_len, pad_len);
    for (Eigen::Index r = 0; r < cm.rows(); ++r)
        for (Eigen::Index c = 0; c < cm.cols(); ++c)
            padded(r, c) = cm(order[static_cast<std::size_t>(r)], order[static_cast<std::size_t>(c)]);

    Descriptor d;
    d.kind = DescriptorKind::CmSorted;
    d.pad_len = pad_len;
    d.values.resize(static_cast<Eigen::Index>(pad_len) * pad_len);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(d.values.data(), pad_len,
                                                                                       pad_len) = padded;
    return d;
}

FeatureMatrix featurize(const std::vector<CrystalStructure>& dataset, DescriptorKind kind, int pad_len)
{
    FeatureMatrix fm;
    fm.kind = kind;
    if (kind != DescriptorKind::Ofm && pad_len <= 0) {
        std::size_t max_sites = 0;
        for (const auto& s : dataset) max_sites = std::max(max_sites, s.size());
        pad_len = static_cast<int>(max_sites);
    }
    fm.pad_len = kind == DescriptorKind::Ofm ? 0 : pad_len;

    const Eigen::Index width = kind == DescriptorKind::Ofm        ? kOfmLength
                               : kind == DescriptorKind::CmSpectrum ? pad_len
                                                                    : static_cast<Eigen::Index>(pad_len) * pad_len;
    fm.values.resize(static_cast<Eigen::Index>(dataset.size()), width);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto& s = dataset[i];
        Descriptor d;
        switch (kind) {
        case DescriptorKind::Ofm: d = material_ofm(s); break;
        case DescriptorKind::CmSpectrum: d = cm_eigenspectrum(coulomb_matrix(s), pad_len); break;
        case DescriptorKind::CmSorted: d = cm_sorted(coulomb_matrix(s), pad_len); break;
        }
        fm.ids.push_back(s.id);
        fm.values.row(static_cast<Eigen::Index>(i)) = d.values.transpose();
    }
    return fm;
}

} // namespace matsim
