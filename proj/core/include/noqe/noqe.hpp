#pragma once

#include "noqe/basis.hpp"
#include "noqe/correlation.hpp"
#include "noqe/fock.hpp"
#include "noqe/geometry.hpp"
#include "noqe/integrals.hpp"
#include "noqe/lowrank.hpp"
#include "noqe/scf.hpp"
#include "noqe/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace noqe {

struct LowRankOptions {
    double trunc_eps = 0.0;  // 0 keeps every value above the factorization tol
    int trotter_steps = 1;
    int suzuki_order = 0;  // 0 means exact per-value factors, no splitting
};

struct NoqeOptions {
    AmplitudeScaling scaling;
    double overlap_threshold = 1e-4;
    FactorMethod method = FactorMethod::takagi;
    std::optional<LowRankOptions> lowrank;  // empty: exact e^tau dressing
    bool with_fci = true;
};

// Basis handling for the off-diagonal elements: global expresses every dressed
// state in the first reference's basis; relative rotates each ket into the
// bra's own basis pairwise. Both give the same (H, S) to 1e-10.
enum class RotationScheme { global, relative };

struct SubspaceMatrices {
    CMat h;
    CMat s;
};
SubspaceMatrices subspace_matrices(const IntegralSet& ints, const ReferenceSet& refset,
                                   const NoqeOptions& opts,
                                   RotationScheme scheme = RotationScheme::global);

struct StateInfo {
    double energy = 0.0;
    double s2 = 0.0;
    double infidelity = 0.0;
    std::string label;
};

struct ReferenceDiag {
    double e_uhf = 0.0;
    double s2_det = 0.0;
    double e_mp2 = 0.0;  // unscaled correlation energy
    int l_eff = 0;       // retained values of the symmetrized supermatrix
    int l_trunc = 0;     // values kept by the dressing (equals l_eff when exact)
    bool diagonal_pair = false;
};

struct PointResult {
    double r = 0.0;  // geometry parameter in angstrom
    bool broken = false;
    double e_rhf = 0.0;
    int nret = 0;  // states kept by canonical orthogonalization
    std::vector<StateInfo> noqe;
    std::vector<StateInfo> noci;  // tau = 0, same references
    std::vector<ReferenceDiag> refs;
    Vec e_fci;
    Vec fci_s2;
    Vec overlap_eigs;
};

// Generalized eigenproblem H c = E S c by canonical orthogonalization:
// overlap eigenvalues <= threshold are discarded, the rest whitened.
struct GeneralizedSolution {
    Vec energies;
    CMat vectors;  // in the original reference basis, columns normalized
    Vec overlap_eigs;
    int nret = 0;
};
GeneralizedSolution solve_generalized(const CMat& h, const CMat& s, double threshold);

std::string spin_label(double s2, double tol = 0.1);
// Lowest-energy state whose <S^2> is within tol of the target; -1 if none.
int pick_state(const Vec& energies, const Vec& s2, double target, double tol = 0.5);

// Full pipeline at one geometry: references, doubles, dressing, matrix
// elements in the restricted common basis, generalized diagonalization,
// FCI comparison.
PointResult analyze_point(const Molecule& mol, const BasisLibrary& lib, int d,
                          const NoqeOptions& opts);

double spin_gap(const PointResult& p);       // E(T1) - E(S0) from the NOQE states
double fci_spin_gap(const PointResult& p);   // same from the FCI roots

struct ScanRow {
    double r = 0.0;
    PointResult result;
    bool ok = false;
    std::string error;
};
// Evaluate every grid point, optionally across a thread pool; rows come back
// in grid order regardless of completion order.
std::vector<ScanRow> scan_grid(const std::vector<double>& grid,
                               const std::function<Molecule(double)>& geometry,
                               const BasisLibrary& lib, int d,
                               const NoqeOptions& opts, int jobs = 1);

}  // namespace noqe
