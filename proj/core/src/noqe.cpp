#include "noqe/noqe.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <utility>

namespace noqe {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// One reference after amplitude construction and dressing, still in its own
// orbital basis. oa/ob are the overlap factors Q^T S C against the common
// (first-reference) orbitals, already made proper rotations.
struct Dressed {
    Mat ca, cb;
    Mat oa, ob;
    CVec psi;   // e^tau |det>
    CVec bare;  // |det>
};

struct Pipeline {
    SectorSpace space;
    int n = 0;
    int na = 0, nb = 0;
    std::vector<int> occ;
    std::vector<Dressed> refs;
    std::vector<ReferenceDiag> diags;

    explicit Pipeline(SectorSpace s) : space(std::move(s)) {}
};

// Principal logarithm of an orthogonal matrix built from its complex Schur
// form. The Schur vectors are unitary and the diagonal gets i arg(lambda), so
// the result is anti-Hermitian by construction; a generic matrix log can lose
// that when an eigenvalue pair sits exactly at -1 (opposite-phase virtual
// columns produce those routinely).
CMat unitary_log(const Mat& o) {
    Eigen::ComplexSchur<CMat> schur(o.cast<cplx>());
    if (schur.info() != Eigen::Success) throw Error("Schur decomposition failed");
    CVec d = schur.matrixT().diagonal();
    for (int i = 0; i < d.size(); ++i) {
        if (std::abs(std::abs(d[i]) - 1.0) > 1e-8)
            throw Error("overlap factor between references is not orthogonal");
        d[i] = cplx(0.0, std::arg(d[i]));
    }
    return schur.matrixU() * d.asDiagonal() * schur.matrixU().adjoint();
}

// Spin-blocked log of the orbital overlap factors; both blocks are proper
// rotations after the determinant fix.
CMat block_log(const Mat& oa, const Mat& ob) {
    const int n = static_cast<int>(oa.rows());
    CMat k = CMat::Zero(2 * n, 2 * n);
    k.topLeftCorner(n, n) = unitary_log(oa);
    k.bottomRightCorner(n, n) = unitary_log(ob);
    return k;
}

Pipeline dress_references(const IntegralSet& ints, const ReferenceSet& refset,
                          const NoqeOptions& opts) {
    if (refset.refs.empty()) throw Error("no references to dress");
    const int n = ints.nbf;
    const int na = refset.refs[0].scf.na;
    const int nb = refset.refs[0].scf.nb;

    Pipeline p(SectorSpace::number_space(2 * n, na + nb));
    p.n = n;
    p.na = na;
    p.nb = nb;
    for (int i = 0; i < na; ++i) p.occ.push_back(i);
    for (int i = 0; i < nb; ++i) p.occ.push_back(n + i);
    std::vector<int> virt;
    for (int s = 0; s < 2 * n; ++s)
        if (std::find(p.occ.begin(), p.occ.end(), s) == p.occ.end()) virt.push_back(s);

    const Mat& q = refset.refs[0].scf.Ca;
    Vec eps(2 * n);

    for (const Reference& ref : refset.refs) {
        Dressed d;
        d.ca = ref.scf.Ca;
        d.cb = ref.scf.Cb;

        // Make Q^T S C a proper rotation before anything downstream sees the
        // orbitals: a negative determinant is absorbed into the sign of the
        // last (virtual) column, which leaves the determinant state alone.
        d.oa = q.transpose() * ints.S * d.ca;
        if (d.oa.determinant() < 0.0) {
            d.ca.col(n - 1) *= -1.0;
            d.oa.col(n - 1) *= -1.0;
        }
        d.ob = q.transpose() * ints.S * d.cb;
        if (d.ob.determinant() < 0.0) {
            d.cb.col(n - 1) *= -1.0;
            d.ob.col(n - 1) *= -1.0;
        }

        Tensor4 g = mo_eri_spin(ints.eri, d.ca, d.cb);
        eps.head(n) = ref.scf.ea;
        eps.tail(n) = ref.scf.eb;
        Mp2Amplitudes amps = mp2_amplitudes(g, eps, p.occ, virt, n, opts.scaling);
        Mat t = build_supermatrix(amps);

        ReferenceDiag diag;
        diag.e_uhf = ref.scf.E;
        diag.s2_det = s_squared_det(ints.S, d.ca, d.cb, na, nb);
        diag.e_mp2 = amps.e_mp2;
        diag.l_eff = factorize(t, FactorMethod::takagi).L();
        diag.l_trunc = diag.l_eff;
        diag.diagonal_pair = ref.diagonal_class;

        d.bare = p.space.det_state(p.occ);
        if (!opts.lowrank) {
            d.psi = apply_cluster_exact(p.space, t, d.bare);
        } else {
            Factorization f = truncate(factorize(t, opts.method), opts.lowrank->trunc_eps);
            diag.l_trunc = f.L();
            if (opts.lowrank->suzuki_order == 0)
                d.psi = apply_cluster_exact(p.space, reconstruct_supermatrix(f), d.bare);
            else
                d.psi = apply_cluster_lowrank(p.space, f, d.bare, opts.lowrank->trotter_steps,
                                              opts.lowrank->suzuki_order);
        }
        p.diags.push_back(diag);
        p.refs.push_back(std::move(d));
    }
    return p;
}

// Everything expressed in the common basis: sector Hamiltonian, rotated
// dressed and bare states, and the two pairs of subspace matrices.
struct GlobalAssembly {
    CMat hq;
    Tensor4 gq;
    CMat hmat;
    CMat states;
    CMat bare;
    CMat h, s;    // dressed
    CMat hn, sn;  // tau = 0
};

GlobalAssembly assemble_global(const IntegralSet& ints, const Mat& q, const Pipeline& p,
                               bool want_noci) {
    const int m = static_cast<int>(p.refs.size());
    GlobalAssembly a;
    a.hq = mo_h_spin(ints.hcore(), q, q).cast<cplx>();
    a.gq = mo_eri_spin(ints.eri, q, q);
    a.hmat = p.space.hamiltonian(a.hq, a.gq, ints.e_nuc);

    a.states.resize(p.space.dim(), m);
    a.bare.resize(p.space.dim(), m);
    for (int j = 0; j < m; ++j) {
        CMat u = p.space.rotation_operator(block_log(p.refs[j].oa, p.refs[j].ob));
        a.states.col(j) = u * p.refs[j].psi;
        a.bare.col(j) = u * p.refs[j].bare;
    }

    a.h.resize(m, m);
    a.s.resize(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            PairElements pe = matrix_elements(a.hmat, a.states.col(i), a.states.col(j));
            a.h(i, j) = pe.h;
            a.s(i, j) = pe.s;
        }
    if (want_noci) {
        a.hn.resize(m, m);
        a.sn.resize(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                PairElements pe = matrix_elements(a.hmat, a.bare.col(i), a.bare.col(j));
                a.hn(i, j) = pe.h;
                a.sn(i, j) = pe.s;
            }
    }
    return a;
}

std::vector<StateInfo> state_table(const GeneralizedSolution& g, const CMat& states,
                                   const CMat& s2op, const CMat& fci_embedded) {
    std::vector<StateInfo> out;
    for (int k = 0; k < g.nret; ++k) {
        CVec full = states * g.vectors.col(k);
        double nrm = full.norm();
        if (nrm > 0.0) full /= nrm;

        StateInfo si;
        si.energy = g.energies[k];
        si.s2 = std::real(full.dot(s2op * full));
        si.infidelity = kNan;
        if (fci_embedded.cols() > 0) {
            double best = 0.0;
            for (int kk = 0; kk < fci_embedded.cols(); ++kk)
                best = std::max(best, std::norm(fci_embedded.col(kk).dot(full)));
            si.infidelity = 1.0 - best;
        }
        si.label = spin_label(si.s2);
        out.push_back(std::move(si));
    }
    return out;
}

}  // namespace

SubspaceMatrices subspace_matrices(const IntegralSet& ints, const ReferenceSet& refset,
                                   const NoqeOptions& opts, RotationScheme scheme) {
    Pipeline p = dress_references(ints, refset, opts);
    if (scheme == RotationScheme::global) {
        GlobalAssembly a = assemble_global(ints, refset.refs[0].scf.Ca, p, false);
        return {a.h, a.s};
    }

    // Relative scheme: the bra basis carries the Hamiltonian and each ket is
    // rotated into it pairwise. The pairwise overlap factor C_I^T S C_J is a
    // proper rotation because both global factors already are.
    const int m = static_cast<int>(p.refs.size());
    CMat h(m, m), s(m, m);
    const Mat hcore = ints.hcore();
    for (int i = 0; i < m; ++i) {
        CMat hi = mo_h_spin(hcore, p.refs[i].ca, p.refs[i].cb).cast<cplx>();
        Tensor4 gi = mo_eri_spin(ints.eri, p.refs[i].ca, p.refs[i].cb);
        CMat hop = p.space.hamiltonian(hi, gi, ints.e_nuc);
        for (int j = 0; j < m; ++j) {
            CVec ket = p.refs[j].psi;
            if (j != i) {
                Mat oa = p.refs[i].ca.transpose() * ints.S * p.refs[j].ca;
                Mat ob = p.refs[i].cb.transpose() * ints.S * p.refs[j].cb;
                ket = p.space.rotation_operator(block_log(oa, ob)) * ket;
            }
            PairElements pe = matrix_elements(hop, p.refs[i].psi, ket);
            h(i, j) = pe.h;
            s(i, j) = pe.s;
        }
    }
    return {h, s};
}

GeneralizedSolution solve_generalized(const CMat& h, const CMat& s, double threshold) {
    if (h.rows() != h.cols() || s.rows() != s.cols() || h.rows() != s.rows())
        throw Error("subspace matrices must be square and of equal size");
    const int m = static_cast<int>(s.rows());

    Eigen::SelfAdjointEigenSolver<CMat> ses(s);
    if (ses.info() != Eigen::Success) throw Error("overlap eigendecomposition failed");

    GeneralizedSolution out;
    out.overlap_eigs = ses.eigenvalues();

    std::vector<int> keep;
    for (int i = 0; i < m; ++i)
        if (out.overlap_eigs[i] > threshold) keep.push_back(i);
    out.nret = static_cast<int>(keep.size());
    if (out.nret == 0) throw Error("no overlap eigenvalue above threshold");

    CMat x(m, out.nret);
    for (int j = 0; j < out.nret; ++j)
        x.col(j) = ses.eigenvectors().col(keep[j]) / std::sqrt(out.overlap_eigs[keep[j]]);

    Eigen::SelfAdjointEigenSolver<CMat> hes(x.adjoint() * h * x);
    if (hes.info() != Eigen::Success) throw Error("projected Hamiltonian diagonalization failed");
    out.energies = hes.eigenvalues();
    out.vectors = x * hes.eigenvectors();

    // Deterministic output: rotate each coefficient column so its largest
    // entry is real positive.
    for (int k = 0; k < out.nret; ++k) {
        int arg = 0;
        out.vectors.col(k).cwiseAbs().maxCoeff(&arg);
        cplx z = out.vectors(arg, k);
        if (std::abs(z) > 0.0) out.vectors.col(k) *= std::conj(z) / std::abs(z);
    }
    return out;
}

std::string spin_label(double s2, double tol) {
    if (std::abs(s2) < tol) return "singlet";
    if (std::abs(s2 - 2.0) < tol) return "triplet";
    // the quintet window is tighter: near-quintet contaminated states are a
    // feature of the method and must not be mislabeled
    if (std::abs(s2 - 6.0) < 0.6 * tol) return "quintet";
    return "mixed";
}

int pick_state(const Vec& energies, const Vec& s2, double target, double tol) {
    for (int i = 0; i < energies.size(); ++i)
        if (std::abs(s2[i] - target) < tol) return i;
    return -1;
}

PointResult analyze_point(const Molecule& mol, const BasisLibrary& lib, int d,
                          const NoqeOptions& opts) {
    AOBasis basis = build_ao_basis(mol, lib);
    IntegralSet ints = compute_integrals(mol, basis);
    ReferenceSet refset = generate_references(ints, basis, d);
    Pipeline p = dress_references(ints, refset, opts);
    GlobalAssembly a = assemble_global(ints, refset.refs[0].scf.Ca, p, true);

    PointResult out;
    out.broken = refset.broken;
    out.e_rhf = refset.e_rhf;
    out.refs = p.diags;

    GeneralizedSolution gen = solve_generalized(a.h, a.s, opts.overlap_threshold);
    GeneralizedSolution noc = solve_generalized(a.hn, a.sn, opts.overlap_threshold);
    out.nret = gen.nret;
    out.overlap_eigs = gen.overlap_eigs;

    CMat femb;
    if (opts.with_fci) {
        SectorSpace msz(2 * p.n, p.na, p.nb);
        FciResult fci = fci_solve(msz, a.hq, a.gq, ints.e_nuc);
        out.e_fci = fci.energies;
        out.fci_s2 = fci.s2;
        // the m_s = 0 sector embeds in the dressing space determinant by
        // determinant, so fidelities can be taken there directly
        femb = CMat::Zero(p.space.dim(), fci.energies.size());
        for (int i = 0; i < msz.dim(); ++i) {
            int row = p.space.index_of(msz.det(i));
            if (row < 0) throw Error("FCI determinant missing from the dressing sector");
            femb.row(row) = fci.vectors.row(i);
        }
    }

    CMat s2op = p.space.s2_operator();
    out.noqe = state_table(gen, a.states, s2op, femb);
    out.noci = state_table(noc, a.bare, s2op, femb);
    return out;
}

double spin_gap(const PointResult& p) {
    const int ns = static_cast<int>(p.noqe.size());
    Vec e(ns), s(ns);
    for (int i = 0; i < ns; ++i) {
        e[i] = p.noqe[i].energy;
        s[i] = p.noqe[i].s2;
    }
    int i0 = pick_state(e, s, 0.0);
    int i1 = pick_state(e, s, 2.0);
    if (i0 < 0 || i1 < 0) return kNan;
    return e[i1] - e[i0];
}

double fci_spin_gap(const PointResult& p) {
    const int ns = std::min<int>(10, static_cast<int>(p.e_fci.size()));
    Vec e = p.e_fci.head(ns);
    Vec s = p.fci_s2.head(ns);
    int i0 = pick_state(e, s, 0.0);
    int i1 = pick_state(e, s, 2.0);
    if (i0 < 0 || i1 < 0) return kNan;
    return e[i1] - e[i0];
}

std::vector<ScanRow> scan_grid(const std::vector<double>& grid,
                               const std::function<Molecule(double)>& geometry,
                               const BasisLibrary& lib, int d,
                               const NoqeOptions& opts, int jobs) {
    std::vector<ScanRow> rows(grid.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            rows[i].r = grid[i];
            try {
                rows[i].result = analyze_point(geometry(grid[i]), lib, d, opts);
                rows[i].result.r = grid[i];
                rows[i].ok = true;
            } catch (const std::exception& e) {
                rows[i].ok = false;
                rows[i].error = e.what();
            }
        }
    };

    const int nt = std::max(1, jobs);
    if (nt == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

}  // namespace noqe
