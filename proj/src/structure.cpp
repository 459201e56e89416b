#include "matsim/structure.hpp"

#include "matsim/element_table.hpp"
#include "matsim/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace matsim {

namespace {

using json = nlohmann::json;

bool offset_less(const Offset3& a, const Offset3& b)
{
    return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
}

bool image_less(const PeriodicImage& a, const PeriodicImage& b)
{
    if (a.site != b.site) return a.site < b.site;
    return offset_less(a.offset, b.offset);
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(std::string s)
{
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

} // namespace

Vec3 wrap_fractional(const Vec3& frac)
{
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
        double w = frac[i] - std::floor(frac[i]);
        // tiny negative inputs round up to exactly 1.0
        if (w >= 1.0) w = 0.0;
        out[i] = w;
    }
    return out;
}

CrystalStructure make_structure(std::string id, const Lattice& lattice,
                                const std::vector<std::pair<std::string, Vec3>>& sites,
                                std::optional<double> formation_energy)
{
    if (!lattice.allFinite())
        throw ParseError("structure '" + id + "': lattice has non-finite entries");
    const double volume = std::abs(lattice.determinant());
    if (!(volume > kMinCellVolume))
        throw SingularLatticeError("structure '" + id + "': singular lattice (|det| = " +
                                   std::to_string(volume) + ")");
    if (sites.empty()) throw ParseError("structure '" + id + "': no sites");

    CrystalStructure s;
    s.id = std::move(id);
    s.lattice = lattice;
    s.formation_energy = formation_energy;
    s.sites.reserve(sites.size());
    for (const auto& [symbol, frac] : sites) {
        if (!frac.allFinite())
            throw ParseError("structure '" + s.id + "': non-finite coordinate");
        const Element& e = element_by_symbol(symbol);
        s.sites.push_back(Site{std::string(e.symbol), e.atomic_number, wrap_fractional(frac)});
    }
    return s;
}

CrystalStructure parse_structure(std::string_view content)
{
    json doc;
    try {
        doc = json::parse(content);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed structure document: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("structure document must be a JSON object");

    try {
        const std::string id = doc.at("id").get<std::string>();

        const json& lat = doc.at("lattice");
        if (!lat.is_array() || lat.size() != 3)
            throw ParseError("structure '" + id + "': lattice must be a 3x3 array");
        Lattice lattice;
        for (int r = 0; r < 3; ++r) {
            const json& row = lat[static_cast<std::size_t>(r)];
            if (!row.is_array() || row.size() != 3)
                throw ParseError("structure '" + id + "': lattice must be a 3x3 array");
            for (int c = 0; c < 3; ++c) lattice(r, c) = row[static_cast<std::size_t>(c)].get<double>();
        }

        const json& jsites = doc.at("sites");
        if (!jsites.is_array()) throw ParseError("structure '" + id + "': sites must be an array");
        std::vector<std::pair<std::string, Vec3>> sites;
        for (const json& js : jsites) {
            const json& frac = js.at("frac");
            if (!frac.is_array() || frac.size() != 3)
                throw CoordinateCountError("structure '" + id + "': site needs exactly 3 fractional coordinates, got " +
                                           std::to_string(frac.is_array() ? frac.size() : 0));
            sites.emplace_back(js.at("element").get<std::string>(),
                               Vec3(frac[0].get<double>(), frac[1].get<double>(), frac[2].get<double>()));
        }

        std::optional<double> energy;
        if (auto it = doc.find("formation_energy"); it != doc.end() && !it->is_null())
            energy = it->get<double>();

        return make_structure(id, lattice, sites, energy);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed structure document: ") + e.what());
    }
}

CrystalStructure load_structure(const std::filesystem::path& path)
{
    return parse_structure(read_file(path));
}

std::string structure_to_json(const CrystalStructure& s)
{
    json doc;
    doc["id"] = s.id;
    doc["lattice"] = json::array();
    for (int r = 0; r < 3; ++r)
        doc["lattice"].push_back({s.lattice(r, 0), s.lattice(r, 1), s.lattice(r, 2)});
    doc["sites"] = json::array();
    for (const auto& site : s.sites)
        doc["sites"].push_back({{"element", site.element}, {"frac", {site.frac[0], site.frac[1], site.frac[2]}}});
    doc["formation_energy"] = s.formation_energy ? json(*s.formation_energy) : json(nullptr);
    return doc.dump(2);
}

Positions cartesian_coords(const CrystalStructure& s)
{
    Positions frac(static_cast<Eigen::Index>(s.size()), 3);
    for (std::size_t i = 0; i < s.size(); ++i) frac.row(static_cast<Eigen::Index>(i)) = s.sites[i].frac.transpose();
    return frac * s.lattice;
}

Offset3 offset_bounds(const Lattice& lattice, double radius)
{
    // |frac_i(v)| <= |v| * |column i of lattice^-1|
    const Eigen::Matrix3d inv = lattice.inverse();
    Offset3 bound;
    for (int i = 0; i < 3; ++i) bound[i] = static_cast<int>(std::floor(radius * inv.col(i).norm())) + 1;
    return bound;
}

namespace {

template <class Visit>
void for_each_offset(const Offset3& bound, Visit&& visit)
{
    for (int a = -bound[0]; a <= bound[0]; ++a)
        for (int b = -bound[1]; b <= bound[1]; ++b)
            for (int c = -bound[2]; c <= bound[2]; ++c) visit(Offset3(a, b, c));
}

} // namespace

std::vector<PeriodicImage> periodic_images(const CrystalStructure& s, double cutoff)
{
    if (!(cutoff > 0.0)) throw DomainError("periodic_images: cutoff must be positive");
    const Positions home = cartesian_coords(s);
    const Offset3 bound = offset_bounds(s.lattice, cutoff);
    std::vector<PeriodicImage> out;
    for (std::size_t j = 0; j < s.size(); ++j) {
        for_each_offset(bound, [&](const Offset3& n) {
            if (n.isZero()) return;
            const Vec3 pos = home.row(static_cast<Eigen::Index>(j)).transpose() + s.lattice.transpose() * n.cast<double>();
            const double d = (home.rowwise() - pos.transpose()).rowwise().norm().minCoeff();
            if (d <= cutoff) out.push_back({static_cast<int>(j), n, pos});
        });
    }
    std::sort(out.begin(), out.end(), image_less);
    return out;
}

std::vector<PeriodicImage> images_within(const CrystalStructure& s, const Vec3& center, double cutoff)
{
    if (!(cutoff > 0.0)) throw DomainError("images_within: cutoff must be positive");
    const Positions home = cartesian_coords(s);
    const Offset3 bound = offset_bounds(s.lattice, cutoff);
    std::vector<PeriodicImage> out;
    for (std::size_t j = 0; j < s.size(); ++j) {
        for_each_offset(bound, [&](const Offset3& n) {
            const Vec3 pos = home.row(static_cast<Eigen::Index>(j)).transpose() + s.lattice.transpose() * n.cast<double>();
            const double d = (pos - center).norm();
            if (d == 0.0 && n.isZero()) return;
            if (d <= cutoff) out.push_back({static_cast<int>(j), n, pos});
        });
    }
    std::sort(out.begin(), out.end(), image_less);
    return out;
}

double min_image_distance(const CrystalStructure& s, std::size_t i, std::size_t j)
{
    const Vec3 df = s.sites[j].frac - s.sites[i].frac;
    Vec3 wrapped = df;
    for (int k = 0; k < 3; ++k) wrapped[k] -= std::round(wrapped[k]);
    const Vec3 base = s.lattice.transpose() * wrapped;
    double best = (i == j) ? std::numeric_limits<double>::infinity() : base.norm();
    // any shorter image lies within |base| (or the shortest lattice vector)
    double radius = best;
    if (i == j) radius = s.lattice.rowwise().norm().minCoeff();
    const Offset3 bound = offset_bounds(s.lattice, radius);
    for_each_offset(bound, [&](const Offset3& n) {
        if (i == j && n.isZero()) return;
        const double d = (base + s.lattice.transpose() * n.cast<double>()).norm();
        best = std::min(best, d);
    });
    return best;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& manifest)
{
    std::ifstream in(manifest);
    if (!in) throw ParseError("cannot open manifest '" + manifest.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw ParseError("manifest '" + manifest.string() + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);
    if (header.size() != 3 || trim(header[0]) != "id" || trim(header[1]) != "path" ||
        trim(header[2]) != "formation_energy")
        throw ParseError("manifest header must be 'id,path,formation_energy'");

    const std::filesystem::path base = manifest.parent_path();
    std::vector<ManifestEntry> out;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw ParseError("manifest row " + std::to_string(row) + ": expected 3 fields");
        ManifestEntry e;
        e.id = trim(fields[0]);
        std::filesystem::path p = trim(fields[1]);
        e.path = p.is_absolute() ? p : base / p;
        const std::string energy = trim(fields[2]);
        if (!energy.empty()) {
            try {
                std::size_t used = 0;
                e.formation_energy = std::stod(energy, &used);
                if (used != energy.size()) throw std::invalid_argument(energy);
            } catch (const std::exception&) {
                throw ParseError("manifest row " + std::to_string(row) + ": bad formation_energy '" + energy + "'");
            }
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<CrystalStructure> load_dataset(const std::filesystem::path& manifest)
{
    std::vector<CrystalStructure> out;
    for (const auto& entry : load_manifest(manifest)) {
        CrystalStructure s = load_structure(entry.path);
        s.id = entry.id;
        if (entry.formation_energy) s.formation_energy = entry.formation_energy;
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace matsim
