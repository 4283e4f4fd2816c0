#pragma once

#include "noqe/lowrank.hpp"
#include "noqe/types.hpp"

#include <cstdint>
#include <vector>

namespace noqe {

// Fixed-particle-number Fock sector over N spin orbitals with the blocked bit
// convention: alpha orbitals occupy bits [0, N/2), beta bits [N/2, N).
// The default constructor restricts to given (n_alpha, n_beta); number_space
// keeps every determinant of a given electron count (the dressing workspace,
// where cluster pieces that move m_s stay exact); full_space enumerates all
// occupations (used by the swap-test oracle).
class SectorSpace {
  public:
    SectorSpace(int n_so, int na, int nb);
    static SectorSpace number_space(int n_so, int eta);
    static SectorSpace full_space(int n_so);

    int n_so() const { return n_so_; }
    int dim() const { return static_cast<int>(dets_.size()); }
    std::uint64_t det(int i) const { return dets_[i]; }
    int index_of(std::uint64_t mask) const;  // -1 if outside the sector

    // Unit vector on the determinant whose occupied spin orbitals are listed.
    CVec det_state(const std::vector<int>& occ) const;

    // Dense a+_p a_q in this sector.
    CMat apdaq(int p, int q) const;
    // sum_pq k(p,q) a+_p a_q for a one-body coefficient matrix.
    CMat one_body(const CMat& k) const;
    // exp(one_body(k)); the Fock-space lift of the orbital rotation e^k.
    // k must be anti-Hermitian within 1e-10 so the lift is unitary.
    CMat rotation_operator(const CMat& k) const;

    // Slater-Condon Hamiltonian from spin-orbital h and antisymmetrized-ready
    // physicists' g (g(p,q,r,s) = <pq|rs>); e_nuc added on the diagonal.
    CMat hamiltonian(const CMat& h, const Tensor4& g, double e_nuc) const;

    // Total-spin operator S^2 = S-S+ + Sz(Sz+1).
    CMat s2_operator() const;

    // Cluster generator from a doubles supermatrix: for every canonical pair
    // the excitation string minus its adjoint, applied bitstring-wise so that
    // intermediate determinants may leave the sector; a string ending outside
    // the sector is projected away.
    CMat cluster_operator(const Mat& t_super) const;
    // Excitation part only (no adjoint); used for perturbation diagnostics.
    CMat cluster_plus_operator(const Mat& t_super) const;

    // Diagonal zeroth-order Hamiltonian: sum of occupied orbital energies per
    // determinant, shifted so the reference determinant sits at e_ref.
    CMat h0_diagonal(const Vec& eps_spin, const std::vector<int>& ref_occ,
                     double e_ref) const;

  private:
    SectorSpace() = default;
    int n_so_ = 0;
    std::vector<std::uint64_t> dets_;
    std::vector<int> lookup_;
};

// e^tau |state> for anti-Hermitian tau = cluster_operator(t_super).
CVec apply_cluster_exact(const SectorSpace& sec, const Mat& t_super, const CVec& state);

// Low-rank dressing: product over factor values l of the exact per-l factor
// e^{tau_l}, arranged as an order-p Suzuki splitting with k repetitions.
// p in {1, 2, 4, 6}; p = 2 is the Strang form.
CVec apply_cluster_lowrank(const SectorSpace& sec, const Factorization& f,
                           const CVec& state, int k_steps = 1, int suzuki_order = 2);

// One unitary coupled-cluster Jastrow layer in conjugation form:
// e^K exp(-i sum_pq J(p,q) n_p n_q) e^{K+}, K anti-Hermitian one-body.
struct UcjLayer {
    CMat k;
    Mat jmat;  // real symmetric, full double sum including the diagonal
};
CVec apply_ucj(const SectorSpace& sec, const std::vector<UcjLayer>& layers,
               const CVec& state);

// <bra|H|ket> and <bra|ket> for dressed states expressed in a common basis.
struct PairElements {
    cplx h;
    cplx s;
};
PairElements matrix_elements(const CMat& hmat, const CVec& bra, const CVec& ket);

// Statevector swap-test oracle on 2N+1 qubits: two N-qubit registers and an
// ancilla prepared in |+> (real pass) or |+_Y> (imaginary pass), controlled
// pairwise swap either side of the register preparations, ancilla readout
// combined into the same H_IJ and S_IJ as matrix_elements.
PairElements hadamard_test_oracle(int n_so, const CMat& h, const Tensor4& g,
                                  double e_nuc, std::uint64_t occ_mask,
                                  const CMat& dress_bra, const CMat& dress_ket);

struct FciResult {
    Vec energies;
    CMat vectors;  // columns
    Vec s2;
};
FciResult fci_solve(const SectorSpace& sec, const CMat& h, const Tensor4& g,
                    double e_nuc, int n_roots = -1);

}  // namespace noqe
