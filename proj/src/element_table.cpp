#include "matsim/element_table.hpp"

#include "matsim/error.hpp"

#include <cctype>
#include <sstream>

namespace matsim {

namespace {

// Ground-state configurations outside the preceding noble-gas core,
// including the usual Aufbau exceptions (Cr, Cu, Nb, Mo, Ru, Rh, Pd, Ag,
// Pt, Au, La, Ce, Gd, Ac, Th, Pa, U, Np, Cm, Lr).
constexpr std::array<Element, 103> kElements{{
    {"H", 1, "1s1"},
    {"He", 2, "1s2"},
    {"Li", 3, "2s1"},
    {"Be", 4, "2s2"},
    {"B", 5, "2s2 2p1"},
    {"C", 6, "2s2 2p2"},
    {"N", 7, "2s2 2p3"},
    {"O", 8, "2s2 2p4"},
    {"F", 9, "2s2 2p5"},
    {"Ne", 10, "2s2 2p6"},
    {"Na", 11, "3s1"},
    {"Mg", 12, "3s2"},
    {"Al", 13, "3s2 3p1"},
    {"Si", 14, "3s2 3p2"},
    {"P", 15, "3s2 3p3"},
    {"S", 16, "3s2 3p4"},
    {"Cl", 17, "3s2 3p5"},
    {"Ar", 18, "3s2 3p6"},
    {"K", 19, "4s1"},
    {"Ca", 20, "4s2"},
    {"Sc", 21, "3d1 4s2"},
    {"Ti", 22, "3d2 4s2"},
    {"V", 23, "3d3 4s2"},
    {"Cr", 24, "3d5 4s1"},
    {"Mn", 25, "3d5 4s2"},
    {"Fe", 26, "3d6 4s2"},
    {"Co", 27, "3d7 4s2"},
    {"Ni", 28, "3d8 4s2"},
    {"Cu", 29, "3d10 4s1"},
    {"Zn", 30, "3d10 4s2"},
    {"Ga", 31, "3d10 4s2 4p1"},
    {"Ge", 32, "3d10 4s2 4p2"},
    {"As", 33, "3d10 4s2 4p3"},
    {"Se", 34, "3d10 4s2 4p4"},
    {"Br", 35, "3d10 4s2 4p5"},
    {"Kr", 36, "3d10 4s2 4p6"},
    {"Rb", 37, "5s1"},
    {"Sr", 38, "5s2"},
    {"Y", 39, "4d1 5s2"},
    {"Zr", 40, "4d2 5s2"},
    {"Nb", 41, "4d4 5s1"},
    {"Mo", 42, "4d5 5s1"},
    {"Tc", 43, "4d5 5s2"},
    {"Ru", 44, "4d7 5s1"},
    {"Rh", 45, "4d8 5s1"},
    {"Pd", 46, "4d10"},
    {"Ag", 47, "4d10 5s1"},
    {"Cd", 48, "4d10 5s2"},
    {"In", 49, "4d10 5s2 5p1"},
    {"Sn", 50, "4d10 5s2 5p2"},
    {"Sb", 51, "4d10 5s2 5p3"},
    {"Te", 52, "4d10 5s2 5p4"},
    {"I", 53, "4d10 5s2 5p5"},
    {"Xe", 54, "4d10 5s2 5p6"},
    {"Cs", 55, "6s1"},
    {"Ba", 56, "6s2"},
    {"La", 57, "5d1 6s2"},
    {"Ce", 58, "4f1 5d1 6s2"},
    {"Pr", 59, "4f3 6s2"},
    {"Nd", 60, "4f4 6s2"},
    {"Pm", 61, "4f5 6s2"},
    {"Sm", 62, "4f6 6s2"},
    {"Eu", 63, "4f7 6s2"},
    {"Gd", 64, "4f7 5d1 6s2"},
    {"Tb", 65, "4f9 6s2"},
    {"Dy", 66, "4f10 6s2"},
    {"Ho", 67, "4f11 6s2"},
    {"Er", 68, "4f12 6s2"},
    {"Tm", 69, "4f13 6s2"},
    {"Yb", 70, "4f14 6s2"},
    {"Lu", 71, "4f14 5d1 6s2"},
    {"Hf", 72, "4f14 5d2 6s2"},
    {"Ta", 73, "4f14 5d3 6s2"},
    {"W", 74, "4f14 5d4 6s2"},
    {"Re", 75, "4f14 5d5 6s2"},
    {"Os", 76, "4f14 5d6 6s2"},
    {"Ir", 77, "4f14 5d7 6s2"},
    {"Pt", 78, "4f14 5d9 6s1"},
    {"Au", 79, "4f14 5d10 6s1"},
    {"Hg", 80, "4f14 5d10 6s2"},
    {"Tl", 81, "4f14 5d10 6s2 6p1"},
    {"Pb", 82, "4f14 5d10 6s2 6p2"},
    {"Bi", 83, "4f14 5d10 6s2 6p3"},
    {"Po", 84, "4f14 5d10 6s2 6p4"},
    {"At", 85, "4f14 5d10 6s2 6p5"},
    {"Rn", 86, "4f14 5d10 6s2 6p6"},
    {"Fr", 87, "7s1"},
    {"Ra", 88, "7s2"},
    {"Ac", 89, "6d1 7s2"},
    {"Th", 90, "6d2 7s2"},
    {"Pa", 91, "5f2 6d1 7s2"},
    {"U", 92, "5f3 6d1 7s2"},
    {"Np", 93, "5f4 6d1 7s2"},
    {"Pu", 94, "5f6 7s2"},
    {"Am", 95, "5f7 7s2"},
    {"Cm", 96, "5f7 6d1 7s2"},
    {"Bk", 97, "5f9 7s2"},
    {"Cf", 98, "5f10 7s2"},
    {"Es", 99, "5f11 7s2"},
    {"Fm", 100, "5f12 7s2"},
    {"Md", 101, "5f13 7s2"},
    {"No", 102, "5f14 7s2"},
    {"Lr", 103, "5f14 7s2 7p1"},
}};

} // namespace

std::string orbital_label(int index)
{
    if (index < 0 || index >= kOrbitalCount)
        throw DomainError("orbital index out of range: " + std::to_string(index));
    if (index < 2) return "s" + std::to_string(index + 1);
    if (index < 8) return "p" + std::to_string(index - 1);
    if (index < 18) return "d" + std::to_string(index - 7);
    return "f" + std::to_string(index - 17);
}

std::span<const Element> element_table() { return kElements; }

const Element& element_by_symbol(std::string_view symbol)
{
    for (const auto& e : kElements)
        if (e.symbol == symbol) return e;
    throw UnknownElementError("unknown element symbol '" + std::string(symbol) + "'");
}

const Element& element_by_number(int z)
{
    if (z < 1 || z > static_cast<int>(kElements.size()))
        throw UnknownElementError("atomic number out of range: " + std::to_string(z));
    return kElements[static_cast<std::size_t>(z - 1)];
}

std::vector<int> valence_orbitals(const Element& element)
{
    std::vector<int> out;
    std::istringstream in{std::string(element.valence)};
    std::string token;
    // tokens look like "3d6": principal number, shell letter, occupancy
    while (in >> token) {
        std::size_t pos = 0;
        while (pos < token.size() && std::isdigit(static_cast<unsigned char>(token[pos]))) ++pos;
        const char shell = token.at(pos);
        const int count = std::stoi(token.substr(pos + 1));
        out.push_back(orbital_index(shell, count));
    }
    return out;
}

} // namespace matsim
