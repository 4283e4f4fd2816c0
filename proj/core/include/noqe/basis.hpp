#pragma once

#include "noqe/geometry.hpp"
#include "noqe/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace noqe {

// One contracted s shell as stored in the library (unnormalized coefficients).
struct ShellParams {
    std::vector<double> exps;
    std::vector<double> coefs;
};

struct BasisLibrary {
    std::string name;
    std::map<std::string, std::vector<ShellParams>> elements;
};

// Loads "<name>.dat" from the basis search path: the NOQE_BASIS_PATH environment
// variable if set, otherwise the compiled-in default directory. An argument that
// contains a path separator is treated as a literal file path.
BasisLibrary load_basis_library(const std::string& name);

// A contracted s-type Gaussian placed on an atom; coefficients are normalized so
// the self-overlap is exactly 1.
struct GaussianShell {
    Eigen::Vector3d center{0.0, 0.0, 0.0};
    std::vector<double> exps;
    std::vector<double> coefs;
    int atom = 0;
};

struct AOBasis {
    std::vector<GaussianShell> shells;
    std::vector<Eigen::Vector3d> centers;  // one per atom, bohr

    int nbf() const { return static_cast<int>(shells.size()); }
    int n_atoms() const { return static_cast<int>(centers.size()); }
    int atom_of(int mu) const { return shells[mu].atom; }
};

AOBasis build_ao_basis(const Molecule& mol, const BasisLibrary& lib);

// Normalization helper exposed for tests.
GaussianShell make_normalized_shell(const Eigen::Vector3d& center, const ShellParams& p, int atom);

}  // namespace noqe
