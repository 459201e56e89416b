#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace matsim {

// Subshell-occupancy dictionary {s1, s2, p1..p6, d1..d10, f1..f14}.
inline constexpr int kOrbitalCount = 32;

// Index of label `<shell><count>` in the dictionary, or -1 if the label is
// not a member (e.g. 's3' or 'g1').
constexpr int orbital_index(char shell, int count) noexcept
{
    switch (shell) {
    case 's': return (count >= 1 && count <= 2) ? count - 1 : -1;
    case 'p': return (count >= 1 && count <= 6) ? 2 + count - 1 : -1;
    case 'd': return (count >= 1 && count <= 10) ? 8 + count - 1 : -1;
    case 'f': return (count >= 1 && count <= 14) ? 18 + count - 1 : -1;
    default: return -1;
    }
}

// Label for dictionary index i, e.g. 0 -> "s1", 31 -> "f14".
std::string orbital_label(int index);

struct Element {
    std::string_view symbol;
    int atomic_number;
    // Ground-state configuration beyond the noble-gas core, e.g. "3d6 4s2".
    std::string_view valence;
};

// H (Z=1) through Lr (Z=103), ordered by Z.
std::span<const Element> element_table();

// Throws UnknownElementError.
const Element& element_by_symbol(std::string_view symbol);
const Element& element_by_number(int z);

// Dictionary indices of the element's valence subshells, in the order they
// appear in its configuration.
std::vector<int> valence_orbitals(const Element& element);

} // namespace matsim
