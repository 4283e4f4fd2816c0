#pragma once

#include "noqe/lowrank.hpp"
#include "noqe/types.hpp"

#include <cstdint>

namespace noqe {

enum class Ansatz {
    noucc,  // 1 + mL basis rotations, mL number-operator blocks per state
    noucj,  // 2L basis rotations, L blocks (Jastrow layers), Trotter-free
};

// Inputs to the gate-count model. N counts spin orbitals, M references,
// k Trotter steps, m blocks per retained value, L retained values.
struct CostModel {
    int n_so = 0;
    int n_refs = 1;
    int k_steps = 1;
    int m_blocks = 2;
    int l_values = 0;
    Ansatz ansatz = Ansatz::noucc;
};

struct GateCounts {
    std::int64_t cnot_swap = 0;
    std::int64_t cnot_givens = 0;
    std::int64_t cnot_numop = 0;
    std::int64_t cnot_offdiag = 0;  // one H_IJ circuit
    std::int64_t cnot_diag = 0;     // one H_II circuit
    std::int64_t cnot_total = 0;    // all M(M-1)/2 + M circuits
    std::int64_t rz_swap = 0;
    std::int64_t rz_givens = 0;
    std::int64_t rz_numop = 0;
    std::int64_t rz_offdiag = 0;
    std::int64_t rz_diag = 0;
    std::int64_t rz_total = 0;
    std::int64_t t_total = 0;
    int qubits_full = 0;     // 2N + 1
    int qubits_reduced = 0;  // N + 1
};

// CNOT conversion: Givens 4, number-operator pair 2, CSWAP 8.
// Rz conversion: Givens 2, number-operator product 3, controlled N-swap 7N.
GateCounts gate_counts(const CostModel& cm, double eps_synthesis = 9.765625e-4);

// T gates for a batch of Rz at synthesis accuracy eps:
// ceil(n_rz * (1.15 log2(1/eps) + 9.2)).
std::int64_t t_count(std::int64_t n_rz, double eps_synthesis = 9.765625e-4);

// Reference counts for d radical sites with fixed (n_alpha, n_beta) unpaired
// spins: M = d! / (na! nb! (d-na-nb)!) against the complete-active-space size
// M_CAS = (d!)^2 / (na! nb! (d-na)! (d-nb)!); M_CAS = M^2 when na = nb = d/2.
struct ReferenceCounts {
    std::int64_t m = 0;
    std::int64_t m_cas = 0;
};
ReferenceCounts reference_counts(int d, int na, int nb);

// Depth unit assigned to one parallel layer of Givens rotations. A real
// spin-block rotation schedules its 2 C(N/2,2) rotations into N/2 parallel
// layers; a complex rotation needs twice that.
enum class DepthConvention {
    layered,  // two entangling sub-layers per Givens layer
    givens1,  // one unit per Givens layer
    givens4,  // four units (CNOT-decomposed, serialized)
};

// Two-qubit depth of one ansatz preparation: rotation depth R summed over the
// (include_singles ? 1 : 0) + mL basis rotations plus N layers of parallel
// number-operator rotations per circuit block.
std::int64_t schedule_depth(const Factorization& f, bool include_singles = true,
                            DepthConvention conv = DepthConvention::layered);
std::int64_t schedule_depth(int n_so, FactorMethod method, int l_values,
                            bool include_singles = true,
                            DepthConvention conv = DepthConvention::layered);

}  // namespace noqe
