#!/usr/bin/env python3
"""Writes the small hand-built crystal set under data/toy.

Energies are synthetic labels (a smooth function of composition plus seeded
noise) so the regression commands have something to fit. They are not DFT
values.
"""

import json
import math
import random
import sys
from pathlib import Path


def cubic(a):
    return [[a, 0.0, 0.0], [0.0, a, 0.0], [0.0, 0.0, a]]


def hexagonal(a, c):
    return [[a, 0.0, 0.0], [-a / 2, a * math.sqrt(3) / 2, 0.0], [0.0, 0.0, c]]


FCC = [(0, 0, 0), (0.5, 0.5, 0), (0.5, 0, 0.5), (0, 0.5, 0.5)]


def shifted(points, d):
    return [tuple((p[i] + d[i]) % 1.0 for i in range(3)) for p in points]


def sc(el, a):
    return cubic(a), [(el, (0, 0, 0))]


def bcc(el, a):
    return cubic(a), [(el, (0, 0, 0)), (el, (0.5, 0.5, 0.5))]


def fcc(el, a):
    return cubic(a), [(el, p) for p in FCC]


def b2(a_el, b_el, a):
    return cubic(a), [(a_el, (0, 0, 0)), (b_el, (0.5, 0.5, 0.5))]


def rocksalt(cat, an, a):
    return cubic(a), [(cat, p) for p in FCC] + [(an, p) for p in shifted(FCC, (0.5, 0, 0))]


def zincblende(cat, an, a):
    return cubic(a), [(cat, p) for p in FCC] + [(an, p) for p in shifted(FCC, (0.25, 0.25, 0.25))]


def fluorite(cat, an, a):
    anions = [(x, y, z) for x in (0.25, 0.75) for y in (0.25, 0.75) for z in (0.25, 0.75)]
    return cubic(a), [(cat, p) for p in FCC] + [(an, p) for p in anions]


def perovskite(a_el, b_el, x_el, a):
    return cubic(a), [
        (a_el, (0, 0, 0)),
        (b_el, (0.5, 0.5, 0.5)),
        (x_el, (0.5, 0.5, 0)),
        (x_el, (0.5, 0, 0.5)),
        (x_el, (0, 0.5, 0.5)),
    ]


def hcp(el, a, c):
    return hexagonal(a, c), [(el, (1 / 3, 2 / 3, 0.25)), (el, (2 / 3, 1 / 3, 0.75))]


CRYSTALS = [
    ("Po-sc", sc("Po", 3.35)),
    ("Fe-bcc", bcc("Fe", 2.87)),
    ("Cr-bcc", bcc("Cr", 2.91)),
    ("W-bcc", bcc("W", 3.16)),
    ("Cu-fcc", fcc("Cu", 3.61)),
    ("Al-fcc", fcc("Al", 4.05)),
    ("Ni-fcc", fcc("Ni", 3.52)),
    ("Mg-hcp", hcp("Mg", 3.21, 5.21)),
    ("Ti-hcp", hcp("Ti", 2.95, 4.68)),
    ("Si-diamond", zincblende("Si", "Si", 5.43)),
    ("NaCl-rocksalt", rocksalt("Na", "Cl", 5.64)),
    ("MgO-rocksalt", rocksalt("Mg", "O", 4.21)),
    ("EuO-rocksalt", rocksalt("Eu", "O", 5.14)),
    ("ZnS-zincblende", zincblende("Zn", "S", 5.41)),
    ("CeO2-fluorite", fluorite("Ce", "O", 5.41)),
    ("CsCl-b2", b2("Cs", "Cl", 4.12)),
    ("CuZn-b2", b2("Cu", "Zn", 2.95)),
    ("SmZn-b2", b2("Sm", "Zn", 3.63)),
    ("SrTiO3-perovskite", perovskite("Sr", "Ti", "O", 3.905)),
    ("BaTiO3-perovskite", perovskite("Ba", "Ti", "O", 4.00)),
    ("LaAlO3-perovskite", perovskite("La", "Al", "O", 3.79)),
    ("GdFeO3-perovskite", perovskite("Gd", "Fe", "O", 3.85)),
]

ANIONS = {"O": 1.0, "S": 0.6, "Cl": 0.8}


def synthetic_energy(sites, rng):
    # eV/atom: elemental solids near 0, ionic compounds lower with anion share
    elements = [el for el, _ in sites]
    anion_share = sum(ANIONS.get(el, 0.0) for el in elements) / len(elements)
    mixing = 0.15 * (len(set(elements)) - 1)
    return round(-2.4 * anion_share - mixing + rng.gauss(0.0, 0.05), 6)


def main(root):
    out = Path(root) / "data" / "toy"
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(2024)
    rows = ["id,path,formation_energy"]
    for ident, (lattice, sites) in CRYSTALS:
        energy = synthetic_energy(sites, rng)
        doc = {
            "id": ident,
            "lattice": lattice,
            "sites": [{"element": el, "frac": list(p)} for el, p in sites],
            "formation_energy": energy,
        }
        (out / f"{ident}.json").write_text(json.dumps(doc, indent=2) + "\n")
        rows.append(f"{ident},{ident}.json,{energy!r}")
    (out / "manifest.csv").write_text("\n".join(rows) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent)
