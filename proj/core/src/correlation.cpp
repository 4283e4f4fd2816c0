#include "noqe/correlation.hpp"

#include <cmath>

namespace noqe {

Mp2Amplitudes mp2_amplitudes(const Tensor4& g_spin, const Vec& eps_spin,
                             const std::vector<int>& occ, const std::vector<int>& virt,
                             int n_spatial, const AmplitudeScaling& scaling) {
    const int nso = g_spin.dim();
    Mp2Amplitudes out;
    out.t = Tensor4(nso);
    out.occ = occ;
    out.virt = virt;
    out.n_spatial = n_spatial;
    auto spin = [n_spatial](int p) { return p < n_spatial ? 0 : 1; };
    for (int i : occ)
        for (int j : occ)
            for (int a : virt)
                for (int b : virt) {
                    const double aij = g_spin(i, j, a, b) - g_spin(i, j, b, a);
                    if (std::abs(aij) < 1e-14) continue;
                    const double den = eps_spin[a] + eps_spin[b] - eps_spin[i] - eps_spin[j];
                    if (std::abs(den) < 1e-8)
                        throw Error("vanishing MP2 denominator on a contributing excitation");
                    const double amp = -aij / den;
                    out.e_mp2 += 0.25 * amp * aij;
                    double c;
                    if (spin(i) == spin(j) && spin(a) == spin(b) && spin(i) == spin(a))
                        c = scaling.c_ss;
                    else if (spin(i) != spin(j))
                        c = scaling.c_os;
                    else
                        c = 1.0;  // unreachable for a spin-conserving integral set
                    out.t(a, b, i, j) = c * amp;
                }
    return out;
}

Mat build_supermatrix(const Mp2Amplitudes& amps) {
    const int nso = amps.t.dim();
    const int n = amps.n_spatial;
    Mat T = Mat::Zero(static_cast<Eigen::Index>(nso) * nso, static_cast<Eigen::Index>(nso) * nso);
    for (int a : amps.virt)
        for (int b : amps.virt) {
            if (interleaved_index(a, n) >= interleaved_index(b, n)) continue;
            for (int i : amps.occ)
                for (int j : amps.occ) {
                    if (interleaved_index(i, n) >= interleaved_index(j, n)) continue;
                    T(static_cast<Eigen::Index>(a) * nso + i,
                      static_cast<Eigen::Index>(b) * nso + j) = amps.t(a, b, i, j);
                }
        }
    return T;
}

Tensor4 reconstruct_amplitudes(const Mat& x, const std::vector<int>& occ,
                               const std::vector<int>& virt, int n_spatial) {
    const int nso = 2 * n_spatial;
    if (x.rows() != static_cast<Eigen::Index>(nso) * nso || x.rows() != x.cols())
        throw Error("supermatrix dimension does not match the orbital count");
    Tensor4 t(nso);
    auto slot = [nso](int p, int q) { return static_cast<Eigen::Index>(p) * nso + q; };
    for (int a : virt)
        for (int b : virt)
            for (int i : occ)
                for (int j : occ)
                    t(a, b, i, j) = x(slot(a, i), slot(b, j)) + x(slot(b, j), slot(a, i)) -
                                    x(slot(b, i), slot(a, j)) - x(slot(a, j), slot(b, i));
    return t;
}

}  // namespace noqe
