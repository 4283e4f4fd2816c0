#pragma once

#include "noqe/types.hpp"

#include <string>
#include <vector>

namespace noqe {

struct Atom {
    std::string element = "H";
    int Z = 1;
    Eigen::Vector3d r{0.0, 0.0, 0.0};  // bohr
};

struct Molecule {
    std::vector<Atom> atoms;

    int n_atoms() const { return static_cast<int>(atoms.size()); }
    int n_electrons() const;
};

// Two H atoms on the z axis, bond length in Angstrom.
Molecule make_h2(double r_angstrom);

// Square H4 in the xy plane with ring-ordered corners (0,0), (a,0), (a,a), (0,a).
Molecule make_h4_square(double a_angstrom);

// Text format: optional comment lines (#), one unit line ("angstrom" or "bohr"),
// then one "<element> <x> <y> <z>" line per atom.
Molecule load_geometry(const std::string& path);

double nuclear_repulsion(const Molecule& mol);

}  // namespace noqe
