#include "noqe/geometry.hpp"

#include <fstream>
#include <sstream>

namespace noqe {

int Molecule::n_electrons() const {
    int n = 0;
    for (const auto& a : atoms) n += a.Z;
    return n;
}

namespace {

int charge_of(const std::string& element) {
    if (element == "H") return 1;
    if (element == "He") return 2;
    throw Error("unsupported element '" + element + "': only s-type atoms are available");
}

}  // namespace

Molecule make_h2(double r_angstrom) {
    Molecule mol;
    mol.atoms.push_back({"H", 1, {0.0, 0.0, 0.0}});
    mol.atoms.push_back({"H", 1, {0.0, 0.0, r_angstrom * kBohrPerAngstrom}});
    return mol;
}

Molecule make_h4_square(double a_angstrom) {
    const double a = a_angstrom * kBohrPerAngstrom;
    Molecule mol;
    mol.atoms.push_back({"H", 1, {0.0, 0.0, 0.0}});
    mol.atoms.push_back({"H", 1, {a, 0.0, 0.0}});
    mol.atoms.push_back({"H", 1, {a, a, 0.0}});
    mol.atoms.push_back({"H", 1, {0.0, a, 0.0}});
    return mol;
}

Molecule load_geometry(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open geometry file: " + path);

    Molecule mol;
    double to_bohr = 0.0;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ss(line);
        if (to_bohr == 0.0) {
            std::string unit;
            ss >> unit;
            if (unit == "angstrom")
                to_bohr = kBohrPerAngstrom;
            else if (unit == "bohr")
                to_bohr = 1.0;
            else
                throw Error("geometry file must start with a unit line (angstrom|bohr), got '" +
                            unit + "'");
            continue;
        }
        std::string element;
        double x, y, z;
        if (!(ss >> element >> x >> y >> z))
            throw Error("malformed geometry line: '" + line + "'");
        mol.atoms.push_back({element, charge_of(element),
                             {x * to_bohr, y * to_bohr, z * to_bohr}});
    }
    if (mol.atoms.empty()) throw Error("geometry file has no atoms: " + path);
    return mol;
}

double nuclear_repulsion(const Molecule& mol) {
    double e = 0.0;
    for (int i = 0; i < mol.n_atoms(); ++i)
        for (int j = i + 1; j < mol.n_atoms(); ++j)
            e += mol.atoms[i].Z * mol.atoms[j].Z / (mol.atoms[i].r - mol.atoms[j].r).norm();
    return e;
}

}  // namespace noqe
