#pragma once

#include "noqe/integrals.hpp"
#include "noqe/types.hpp"

#include <array>
#include <functional>
#include <utility>
#include <vector>

namespace noqe {

struct ScfOptions {
    int na = 0;
    int nb = 0;
    int max_iter = 200;
    double conv = 1e-8;     // orthonormal-basis orbital gradient norm
    double damp = 0.0;      // density damping weight on the old density
    int damp_iters = 20;    // damping active for the first iterations only
    double level_shift = 0.0;  // virtual-manifold shift, gradient stays unshifted
    bool restricted = false;
};

struct ScfResult {
    double E = 0.0;
    Mat Ca, Cb;
    Vec ea, eb;
    int na = 0, nb = 0;
    double gnorm = 0.0;
    int iters = 0;
    bool converged = false;
};

// DIIS-accelerated SCF (subspace 8) with optional initial-density damping.
// Column phases are fixed so the largest-|coefficient| AO entry is positive.
ScfResult run_scf(const IntegralSet& ints, const ScfOptions& opt,
                  const Mat* Ca0 = nullptr, const Mat* Cb0 = nullptr);

// <S^2> of a single UHF determinant.
double s_squared_det(const Mat& S, const Mat& Ca, const Mat& Cb, int na, int nb);

// Foster-Boys localization of the given occupied columns by 2x2 Jacobi sweeps.
Mat boys_localize(const std::array<Mat, 3>& dipole, const Mat& c_occ);

// Mulliken population of orbital c summed per atom.
Vec mulliken_populations(const Mat& S, const AOBasis& basis, const Vec& c);

// Completes S-orthonormal occupied columns to a full orthonormal MO set.
Mat complete_virtuals(const Mat& S, const Mat& c_occ);

struct Reference {
    ScfResult scf;
    std::vector<int> alpha_sites;
    bool diagonal_class = false;  // square-H4 site pattern {0,2} or {1,3}
};

struct ReferenceSet {
    std::vector<Reference> refs;
    ScfResult high_spin;
    double e_rhf = 0.0;
    bool broken = false;              // some reference sits below RHF - 1e-8
    bool localization_clean = true;   // every localized orbital met loc_threshold
};

// High-spin UHF -> Boys localization -> site patterns -> damped m_s = 0 UHF per
// pattern. For d = 4 the references are emitted in the fixed order
// (01),(12),(02),(23),(03),(13) so the diagonal patterns sit at J = 3 and 6;
// other d use lexicographic pattern order.
ReferenceSet generate_references(const IntegralSet& ints, const AOBasis& basis, int d,
                                 double loc_threshold = 0.7);

// Rescue pass for an unconverged reference: restarts from the current orbitals
// with progressively heavier damping and level shifting, keeping the best
// gradient norm seen if nothing converges.
ScfResult polish_reference(const IntegralSet& ints, const ScfResult& start);

// Smallest distance at which `broken(R)` turns true, located on a coarse grid
// and bisected down to `width`; returns the bracket midpoint.
double detect_cf_point(const std::function<bool(double)>& broken, double r_lo, double r_hi,
                       double coarse_step = 0.05, double width = 0.005);

}  // namespace noqe
