#pragma once

#include "noqe/basis.hpp"
#include "noqe/types.hpp"

#include <array>
#include <string>

namespace noqe {

// Zeroth Boys function F0(t); series below t = 1e-6, erf closed form above.
double boys_f0(double t);

struct IntegralSet {
    int nbf = 0;
    Mat S;                      // overlap
    Mat T;                      // kinetic
    Mat V;                      // nuclear attraction
    std::array<Mat, 3> dipole;  // <mu| x,y,z |nu>
    Tensor4 eri;                // chemists (mu nu | la si)
    double e_nuc = 0.0;

    Mat hcore() const { return T + V; }
};

IntegralSet compute_integrals(const Molecule& mol, const AOBasis& basis);

// Plain-text round trip at 17 significant digits (exact double recovery).
void dump_integrals(const IntegralSet& ints, const std::string& path);
IntegralSet load_integrals(const std::string& path);

// Spin-orbital one-electron matrix, blocked ordering (alpha spatials then beta).
Mat mo_h_spin(const Mat& h, const Mat& Ca, const Mat& Cb);

// Spin-orbital two-electron tensor in physicists notation, <pq|rs> = (pr|qs) with
// spin(p)==spin(r) and spin(q)==spin(s); blocked ordering.
Tensor4 mo_eri_spin(const Tensor4& eri, const Mat& Ca, const Mat& Cb);

// Sum of absolute one- and two-electron coefficients (used by the error bounds).
double hamiltonian_one_norm(const Mat& h_spin, const Tensor4& g_spin);

}  // namespace noqe
