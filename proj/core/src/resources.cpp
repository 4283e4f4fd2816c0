#include "noqe/resources.hpp"

#include "noqe/types.hpp"

#include <cmath>

namespace noqe {

namespace {

// 2 C(N/2,2): Givens rotations in one spin-blocked basis rotation.
std::int64_t rotation_givens(std::int64_t n_so) {
    const std::int64_t half = n_so / 2;
    return half * (half - 1);
}

std::int64_t binom(int n, int r) {
    if (r < 0 || r > n) return 0;
    std::int64_t out = 1;
    for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
    return out;
}

}  // namespace

std::int64_t t_count(std::int64_t n_rz, double eps_synthesis) {
    if (n_rz <= 0) return 0;
    if (eps_synthesis <= 0.0 || eps_synthesis >= 1.0)
        throw Error("synthesis accuracy must lie in (0, 1)");
    const double per_rz = 1.15 * std::log2(1.0 / eps_synthesis) + 9.2;
    return static_cast<std::int64_t>(std::ceil(static_cast<double>(n_rz) * per_rz));
}

GateCounts gate_counts(const CostModel& cm, double eps_synthesis) {
    if (cm.n_so <= 0 || cm.n_so % 2 != 0) throw Error("gate counts need a positive even N");
    if (cm.n_refs < 1 || cm.k_steps < 1 || cm.l_values < 0)
        throw Error("gate counts need n_refs, k_steps >= 1 and l_values >= 0");

    const std::int64_t n = cm.n_so;
    const std::int64_t m_refs = cm.n_refs;
    const std::int64_t k = cm.k_steps;
    const std::int64_t rot = rotation_givens(n);      // 2 C(N/2,2)
    const std::int64_t pairs = n * (n - 1) / 2;       // C(N,2)

    // NOUCC dresses with 1 + mL basis rotations around mL squared-generator
    // blocks; a UCJ layer is two rotations around one Jastrow block.
    std::int64_t n_rot, n_blk;
    if (cm.ansatz == Ansatz::noucc) {
        n_rot = 1 + static_cast<std::int64_t>(cm.m_blocks) * cm.l_values;
        n_blk = static_cast<std::int64_t>(cm.m_blocks) * cm.l_values;
    } else {
        n_rot = 2 * static_cast<std::int64_t>(cm.l_values);
        n_blk = cm.l_values;
    }

    GateCounts g;
    g.cnot_swap = 32 * n;
    g.cnot_givens = 4 * k * (2 * rot * n_rot + rot);
    g.cnot_numop = 4 * k * n_blk * pairs;
    g.cnot_offdiag = g.cnot_swap + g.cnot_givens + g.cnot_numop;
    g.cnot_diag = 4 * rot * n_rot + g.cnot_numop / 2;
    g.cnot_total = m_refs * (m_refs - 1) / 2 * g.cnot_offdiag + m_refs * g.cnot_diag;

    g.rz_swap = 28 * n;
    g.rz_givens = 2 * k * (2 * rot * n_rot + rot);
    g.rz_numop = 3 * k * n_blk * n * (n + 1);
    g.rz_offdiag = g.rz_swap + g.rz_givens + g.rz_numop;
    g.rz_diag = 2 * rot * n_rot + g.rz_numop / 2;
    g.rz_total = m_refs * (m_refs - 1) / 2 * g.rz_offdiag + m_refs * g.rz_diag;

    g.t_total = t_count(g.rz_total, eps_synthesis);
    g.qubits_full = static_cast<int>(2 * n + 1);
    g.qubits_reduced = static_cast<int>(n + 1);
    return g;
}

ReferenceCounts reference_counts(int d, int na, int nb) {
    if (d < 1 || na < 0 || nb < 0 || na + nb > d)
        throw Error("reference counts need 0 <= na + nb <= d");
    ReferenceCounts rc;
    // d! / (na! nb! (d-na-nb)!) arranged as a product of binomials so the
    // intermediates stay inside 64 bits
    rc.m = binom(d, na) * binom(d - na, nb);
    rc.m_cas = binom(d, na) * binom(d, nb);
    return rc;
}

std::int64_t schedule_depth(int n_so, FactorMethod method, int l_values, bool include_singles,
                            DepthConvention conv) {
    if (n_so <= 0 || n_so % 2 != 0) throw Error("depth model needs a positive even N");
    if (l_values < 0) throw Error("depth model needs l_values >= 0");

    const std::int64_t n = n_so;
    const std::int64_t m = method == FactorMethod::takagi ? 2 : 4;
    const std::int64_t blocks = m * l_values;

    // A real spin-block rotation parallel-schedules into N/2 Givens layers on a
    // line; complex (SVD) rotations double the network.
    std::int64_t layers = n / 2;
    if (method == FactorMethod::svd) layers *= 2;
    std::int64_t unit = 2;
    if (conv == DepthConvention::givens1) unit = 1;
    if (conv == DepthConvention::givens4) unit = 4;
    const std::int64_t r = unit * layers;

    const std::int64_t n_rot = (include_singles ? 1 : 0) + blocks;
    return n_rot * r + blocks * n;
}

std::int64_t schedule_depth(const Factorization& f, bool include_singles, DepthConvention conv) {
    return schedule_depth(f.N, f.method, f.L(), include_singles, conv);
}

}  // namespace noqe
