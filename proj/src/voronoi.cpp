#include "matsim/voronoi.hpp"

#include "matsim/error.hpp"
#include "matsim/io.hpp"

#include <algorithm>
#include <cmath>

namespace matsim {

namespace {

// Half-space {x : normal . x <= offset}, normal of unit length.
struct Plane {
    Vec3 normal;
    double offset;
};

struct Face {
    int plane; // index into the candidate list; negative for bounding-cube faces
    std::vector<Vec3> vertices;
};

// Convex polyhedron around the origin, stored as a list of planar faces.
class Cell {
public:
    explicit Cell(double half)
    {
        const double h = half;
        // each face listed counter-clockwise seen from outside
        faces_.push_back({-1, {{h, -h, -h}, {h, h, -h}, {h, h, h}, {h, -h, h}}});
        faces_.push_back({-2, {{-h, -h, -h}, {-h, -h, h}, {-h, h, h}, {-h, h, -h}}});
        faces_.push_back({-3, {{-h, h, -h}, {-h, h, h}, {h, h, h}, {h, h, -h}}});
        faces_.push_back({-4, {{-h, -h, -h}, {h, -h, -h}, {h, -h, h}, {-h, -h, h}}});
        faces_.push_back({-5, {{-h, -h, h}, {h, -h, h}, {h, h, h}, {-h, h, h}}});
        faces_.push_back({-6, {{-h, -h, -h}, {-h, h, -h}, {h, h, -h}, {h, -h, -h}}});
    }

    double max_radius() const
    {
        double r = 0.0;
        for (const auto& f : faces_)
            for (const auto& v : f.vertices) r = std::max(r, v.norm());
        return r;
    }

    bool touches_bounding_box() const
    {
        return std::any_of(faces_.begin(), faces_.end(), [](const Face& f) { return f.plane < 0; });
    }

    const std::vector<Face>& faces() const noexcept { return faces_; }

    // Cuts away the part outside `plane`. Vertices within `eps` of the plane
    // count as inside, so planes that merely touch the cell leave no face.
    void clip(const Plane& plane, int id, double eps)
    {
        bool any_outside = false;
        for (const auto& f : faces_) {
            for (const auto& v : f.vertices)
                if (plane.normal.dot(v) - plane.offset > eps) {
                    any_outside = true;
                    break;
                }
            if (any_outside) break;
        }
        if (!any_outside) return;

        std::vector<Face> kept;
        std::vector<Vec3> cap;
        for (const auto& f : faces_) {
            Face out{f.plane, {}};
            const std::size_t n = f.vertices.size();
            for (std::size_t i = 0; i < n; ++i) {
                const Vec3& p = f.vertices[i];
                const Vec3& q = f.vertices[(i + 1) % n];
                const double dp = plane.normal.dot(p) - plane.offset;
                const double dq = plane.normal.dot(q) - plane.offset;
                if (dp <= eps) {
                    out.vertices.push_back(p);
                    if (dp >= -eps) cap.push_back(p);
                }
                if ((dp < -eps && dq > eps) || (dp > eps && dq < -eps)) {
                    const Vec3 x = p + (q - p) * (dp / (dp - dq));
                    out.vertices.push_back(x);
                    cap.push_back(x);
                }
            }
            if (out.vertices.size() >= 3) kept.push_back(std::move(out));
        }

        std::vector<Vec3> ring = order_on_plane(dedupe(cap, eps), plane.normal);
        if (ring.size() >= 3) kept.push_back({id, std::move(ring)});
        faces_ = std::move(kept);
    }

private:
    static std::vector<Vec3> dedupe(const std::vector<Vec3>& pts, double eps)
    {
        std::vector<Vec3> out;
        for (const auto& p : pts)
            if (std::none_of(out.begin(), out.end(), [&](const Vec3& q) { return (p - q).norm() <= 10 * eps; }))
                out.push_back(p);
        return out;
    }

    static std::vector<Vec3> order_on_plane(std::vector<Vec3> pts, const Vec3& normal)
    {
        if (pts.size() < 3) return pts;
        Vec3 centroid = Vec3::Zero();
        for (const auto& p : pts) centroid += p;
        centroid /= static_cast<double>(pts.size());
        const Vec3 u = normal.unitOrthogonal();
        const Vec3 w = normal.cross(u);
        std::vector<std::pair<double, Vec3>> keyed;
        keyed.reserve(pts.size());
        for (const auto& p : pts) {
            const Vec3 d = p - centroid;
            keyed.emplace_back(std::atan2(d.dot(w), d.dot(u)), p);
        }
        std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<Vec3> out;
        out.reserve(keyed.size());
        for (auto& [angle, p] : keyed) out.push_back(p);
        return out;
    }

    std::vector<Face> faces_;
};

struct Candidate {
    PeriodicImage image;
    Vec3 rel; // position relative to the central atom
    double distance;
};

bool offset_less(const Offset3& a, const Offset3& b)
{
    return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
}

} // namespace

double triangle_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c)
{
    const double la = a.norm(), lb = b.norm(), lc = c.norm();
    const double numer = std::abs(a.dot(b.cross(c)));
    const double denom = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
    return 2.0 * std::atan2(numer, denom);
}

double polygon_solid_angle(std::span<const Vec3> vertices)
{
    if (vertices.size() < 3) return 0.0;
    Vec3 centroid = Vec3::Zero();
    for (const auto& v : vertices) centroid += v;
    centroid /= static_cast<double>(vertices.size());
    double total = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        total += triangle_solid_angle(centroid, vertices[i], vertices[(i + 1) % vertices.size()]);
    return total;
}

double NeighborShell::total_solid_angle() const
{
    double sum = 0.0;
    for (const auto& r : records) sum += r.solid_angle;
    return sum;
}

NeighborShell neighbor_shell(const CrystalStructure& s, int site_index, const VoronoiOptions& options)
{
    if (site_index < 0 || static_cast<std::size_t>(site_index) >= s.size())
        throw DomainError("neighbor_shell: site index " + std::to_string(site_index) + " out of range");

    const Positions home = cartesian_coords(s);
    const Vec3 center = home.row(site_index).transpose();

    for (double cutoff = options.initial_cutoff; cutoff <= options.max_cutoff; cutoff *= 2.0) {
        std::vector<Candidate> candidates;
        for (const auto& img : images_within(s, center, cutoff)) {
            const Vec3 rel = img.position - center;
            const double d = rel.norm();
            if (d < options.min_separation)
                throw DegenerateGeometryError("structure '" + s.id + "': sites " + std::to_string(site_index) +
                                              " and " + std::to_string(img.site) + " closer than " +
                                              format_double(options.min_separation) + " A");
            candidates.push_back({img, rel, d});
        }
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
            if (a.distance != b.distance) return a.distance < b.distance;
            if (a.image.site != b.image.site) return a.image.site < b.image.site;
            return offset_less(a.image.offset, b.image.offset);
        });

        const double eps = 1e-10 * cutoff;
        Cell cell(2.0 * cutoff);
        double radius = cell.max_radius();
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            // a neighbor beyond twice the farthest vertex cannot cut the cell
            if (candidates[c].distance > 2.0 * radius + eps) break;
            const Vec3 normal = candidates[c].rel / candidates[c].distance;
            cell.clip({normal, 0.5 * candidates[c].distance}, static_cast<int>(c), eps);
            radius = cell.max_radius();
        }
        if (cell.touches_bounding_box() || 2.0 * radius > cutoff) continue;

        NeighborShell shell;
        shell.central_site_index = site_index;
        for (const auto& face : cell.faces()) {
            const double theta = polygon_solid_angle(face.vertices);
            if (theta < options.min_solid_angle) continue;
            const Candidate& cand = candidates[static_cast<std::size_t>(face.plane)];
            shell.records.push_back({s.sites[static_cast<std::size_t>(cand.image.site)].element, cand.image.site,
                                     cand.image.offset, cand.distance, theta});
        }
        std::sort(shell.records.begin(), shell.records.end(), [](const NeighborRecord& a, const NeighborRecord& b) {
            if (a.neighbor_site_index != b.neighbor_site_index) return a.neighbor_site_index < b.neighbor_site_index;
            return offset_less(a.image_offset, b.image_offset);
        });
        for (const auto& r : shell.records) shell.theta_max = std::max(shell.theta_max, r.solid_angle);
        return shell;
    }
    throw OpenCellError("structure '" + s.id + "': Voronoi cell of site " + std::to_string(site_index) +
                        " not closed within " + format_double(options.max_cutoff) + " A");
}

std::vector<NeighborShell> neighbor_shells(const CrystalStructure& s, const VoronoiOptions& options)
{
    std::vector<NeighborShell> out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out.push_back(neighbor_shell(s, static_cast<int>(i), options));
    return out;
}

std::string neighbor_shell_csv(const NeighborShell& shell)
{
    CsvTable table({"neighbor_index", "element", "r_k", "theta_k", "w_k"});
    for (std::size_t k = 0; k < shell.records.size(); ++k) {
        const auto& r = shell.records[k];
        table.add_row({std::to_string(r.neighbor_site_index), r.neighbor_element, format_double(r.distance),
                       format_double(r.solid_angle), format_double(shell.weight(k))});
    }
    return table.str();
}

} // namespace matsim
