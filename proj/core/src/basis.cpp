#include "noqe/basis.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace noqe {

namespace {

#ifndef NOQE_DEFAULT_BASIS_DIR
#define NOQE_DEFAULT_BASIS_DIR "."
#endif

std::string basis_dir() {
    if (const char* env = std::getenv("NOQE_BASIS_PATH"); env && *env) return env;
    return NOQE_DEFAULT_BASIS_DIR;
}

BasisLibrary parse_basis_stream(std::istream& in, const std::string& name,
                                const std::string& origin) {
    BasisLibrary lib;
    lib.name = name;
    std::string line;
    std::string element;
    std::vector<ShellParams> shells;
    int want = 0;
    ShellParams current;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ss(line);
        std::string tok;
        ss >> tok;
        if (tok == "element") {
            if (!element.empty()) lib.elements[element] = shells;
            shells.clear();
            if (!(ss >> element)) throw Error("basis file " + origin + ": missing element symbol");
        } else if (tok == "shell") {
            std::string kind;
            if (!(ss >> kind >> want) || want <= 0)
                throw Error("basis file " + origin + ": malformed shell line '" + line + "'");
            if (kind != "s")
                throw Error("basis file " + origin + ": only s shells are supported, got '" +
                            kind + "'");
            current = ShellParams{};
        } else if (tok == "end") {
            if (!element.empty()) lib.elements[element] = shells;
            element.clear();
            shells.clear();
        } else {
            double e = 0.0, c = 0.0;
            std::istringstream pair(line);
            if (!(pair >> e >> c))
                throw Error("basis file " + origin + ": expected 'exponent coefficient', got '" +
                            line + "'");
            current.exps.push_back(e);
            current.coefs.push_back(c);
            if (static_cast<int>(current.exps.size()) == want) {
                shells.push_back(current);
                want = 0;
            }
        }
    }
    if (!element.empty()) lib.elements[element] = shells;
    if (lib.elements.empty()) throw Error("basis file " + origin + " defines no elements");
    return lib;
}

}  // namespace

BasisLibrary load_basis_library(const std::string& name) {
    std::string path = name;
    if (name.find('/') == std::string::npos) path = basis_dir() + "/" + name + ".dat";
    std::ifstream in(path);
    if (!in) throw Error("cannot open basis set file: " + path);
    return parse_basis_stream(in, name, path);
}

GaussianShell make_normalized_shell(const Eigen::Vector3d& center, const ShellParams& p,
                                    int atom) {
    constexpr double pi = std::numbers::pi;
    GaussianShell sh;
    sh.center = center;
    sh.atom = atom;
    sh.exps = p.exps;
    sh.coefs = p.coefs;
    const int np = static_cast<int>(p.exps.size());
    for (int i = 0; i < np; ++i)
        sh.coefs[i] *= std::pow(2.0 * sh.exps[i] / pi, 0.75);
    double self = 0.0;
    for (int i = 0; i < np; ++i)
        for (int j = 0; j < np; ++j)
            self += sh.coefs[i] * sh.coefs[j] * std::pow(pi / (sh.exps[i] + sh.exps[j]), 1.5);
    const double scale = 1.0 / std::sqrt(self);
    for (auto& c : sh.coefs) c *= scale;
    return sh;
}

AOBasis build_ao_basis(const Molecule& mol, const BasisLibrary& lib) {
    AOBasis basis;
    for (int a = 0; a < mol.n_atoms(); ++a) {
        const Atom& atom = mol.atoms[a];
        basis.centers.push_back(atom.r);
        auto it = lib.elements.find(atom.element);
        if (it == lib.elements.end())
            throw Error("basis set '" + lib.name + "' has no entry for element " + atom.element);
        for (const ShellParams& p : it->second)
            basis.shells.push_back(make_normalized_shell(atom.r, p, a));
    }
    return basis;
}

}  // namespace noqe
