#pragma once

#include "noqe/types.hpp"

#include <string>
#include <vector>

namespace noqe {

// Spin-class amplitude scaling: uniform(s) = {s, s}, scs = {c_ss, c_os},
// sos = {0, c_os}.
struct AmplitudeScaling {
    double c_ss = 1.0;
    double c_os = 1.0;

    static AmplitudeScaling uniform(double s) { return {s, s}; }
};

struct Mp2Amplitudes {
    Tensor4 t;              // t[a,b,i,j], antisymmetrized, spin-class scaled
    double e_mp2 = 0.0;     // unscaled MP2 correlation energy
    std::vector<int> occ;   // blocked spin-orbital labels
    std::vector<int> virt;
    int n_spatial = 0;
};

// First-order doubles amplitudes from spin-orbital integrals. Denominators below
// 1e-8 on a contributing excitation raise an Error.
Mp2Amplitudes mp2_amplitudes(const Tensor4& g_spin, const Vec& eps_spin,
                             const std::vector<int>& occ, const std::vector<int>& virt,
                             int n_spatial, const AmplitudeScaling& scaling = {});

// Canonical cluster supermatrix, blocked labels with interleaved canonical
// conditions: T[a*N+i, b*N+j] = t[a,b,i,j] iff ilv(a) < ilv(b) and ilv(i) < ilv(j).
Mat build_supermatrix(const Mp2Amplitudes& amps);

inline Mat symmetrize(const Mat& t) { return 0.5 * (t + t.transpose()); }

// Doubles tensor regenerated from a (possibly truncated) supermatrix X through
// the quadratic-form operator; inverse of build_supermatrix at full rank.
Tensor4 reconstruct_amplitudes(const Mat& x, const std::vector<int>& occ,
                               const std::vector<int>& virt, int n_spatial);

}  // namespace noqe
