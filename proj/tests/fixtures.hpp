#pragma once

#include "matsim/structure.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

using matsim::CrystalStructure;
using matsim::Lattice;
using matsim::Vec3;

inline Lattice cubic(double a) { return a * Lattice::Identity(); }

inline CrystalStructure simple_cubic(const std::string& el, double a)
{
    return matsim::make_structure("sc", cubic(a), {{el, Vec3::Zero()}});
}

inline CrystalStructure bcc(const std::string& el, double a)
{
    return matsim::make_structure("bcc", cubic(a), {{el, Vec3::Zero()}, {el, Vec3(0.5, 0.5, 0.5)}});
}

inline CrystalStructure fcc(const std::string& el, double a)
{
    return matsim::make_structure("fcc", cubic(a),
                                  {{el, Vec3(0, 0, 0)}, {el, Vec3(0.5, 0.5, 0)}, {el, Vec3(0.5, 0, 0.5)},
                                   {el, Vec3(0, 0.5, 0.5)}});
}

inline CrystalStructure rocksalt(const std::string& cat, const std::string& an, double a)
{
    std::vector<std::pair<std::string, Vec3>> sites;
    const std::vector<Vec3> f{{0, 0, 0}, {0.5, 0.5, 0}, {0.5, 0, 0.5}, {0, 0.5, 0.5}};
    for (const auto& p : f) sites.emplace_back(cat, p);
    for (const auto& p : f) sites.emplace_back(an, p + Vec3(0.5, 0, 0));
    return matsim::make_structure("rocksalt", cubic(a), sites);
}

inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
    return q.normalized().toRotationMatrix();
}

// Lattice rows rotated by R; fractional coordinates are unchanged, so every
// Cartesian position rotates rigidly.
inline CrystalStructure rotated(const CrystalStructure& s, const Eigen::Matrix3d& R)
{
    CrystalStructure out = s;
    out.lattice = s.lattice * R.transpose();
    return out;
}

// A skewed cell with 1..4 sites jittered away from a loose grid so no two
// atoms come close.
inline CrystalStructure random_cell(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-0.25, 0.25);
    std::uniform_real_distribution<double> len(3.0, 5.0);
    std::uniform_int_distribution<int> count(1, 4);
    Lattice L;
    L << len(rng), u(rng), u(rng), u(rng), len(rng), u(rng), u(rng), u(rng), len(rng);
    const std::vector<Vec3> grid{{0, 0, 0}, {0.5, 0.5, 0}, {0.5, 0, 0.5}, {0, 0.5, 0.5}};
    const std::vector<std::string> elements{"Fe", "O", "Na", "Cl"};
    std::vector<std::pair<std::string, Vec3>> sites;
    const int n = count(rng);
    for (int i = 0; i < n; ++i)
        sites.emplace_back(elements[static_cast<std::size_t>(i)],
                           grid[static_cast<std::size_t>(i)] + 0.2 * Vec3(u(rng), u(rng), u(rng)));
    return matsim::make_structure("random", L, sites);
}

inline std::filesystem::path scratch_dir(const std::string& name)
{
    auto dir = std::filesystem::path(MATSIM_TEST_TMP) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace fixtures
