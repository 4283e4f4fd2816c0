#include "noqe/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <bit>
#include <cmath>

namespace noqe {

namespace {

inline int popcount(std::uint64_t m) { return std::popcount(m); }

// Jordan-Wigner sign of a ladder operator on orbital p: parity of the
// occupations below p.
inline double jw_phase(std::uint64_t mask, int p) {
    return popcount(mask & ((std::uint64_t{1} << p) - 1)) % 2 == 0 ? 1.0 : -1.0;
}

struct StringResult {
    std::uint64_t mask = 0;
    double phase = 0.0;  // zero when the string annihilates the determinant
};

inline StringResult annihilate(std::uint64_t mask, int p) {
    const std::uint64_t bit = std::uint64_t{1} << p;
    if (!(mask & bit)) return {};
    return {mask ^ bit, jw_phase(mask, p)};
}

inline StringResult create(std::uint64_t mask, int p) {
    const std::uint64_t bit = std::uint64_t{1} << p;
    if (mask & bit) return {};
    return {mask | bit, jw_phase(mask, p)};
}

}  // namespace

SectorSpace::SectorSpace(int n_so, int na, int nb) {
    if (n_so <= 0 || n_so % 2 != 0 || n_so > 20)
        throw Error("sector needs an even spin-orbital count up to 20");
    const int n = n_so / 2;
    if (na < 0 || nb < 0 || na > n || nb > n) throw Error("sector occupation out of range");
    n_so_ = n_so;
    const std::uint64_t top = std::uint64_t{1} << n_so;
    const std::uint64_t alpha_mask = (std::uint64_t{1} << n) - 1;
    lookup_.assign(top, -1);
    for (std::uint64_t m = 0; m < top; ++m) {
        if (popcount(m & alpha_mask) != na || popcount(m >> n) != nb) continue;
        lookup_[m] = static_cast<int>(dets_.size());
        dets_.push_back(m);
    }
}

SectorSpace SectorSpace::number_space(int n_so, int eta) {
    if (n_so <= 0 || n_so > 20) throw Error("spin-orbital count out of range");
    if (eta < 0 || eta > n_so) throw Error("electron count out of range");
    SectorSpace s;
    s.n_so_ = n_so;
    const std::uint64_t top = std::uint64_t{1} << n_so;
    s.lookup_.assign(top, -1);
    for (std::uint64_t m = 0; m < top; ++m) {
        if (popcount(m) != eta) continue;
        s.lookup_[m] = static_cast<int>(s.dets_.size());
        s.dets_.push_back(m);
    }
    return s;
}

SectorSpace SectorSpace::full_space(int n_so) {
    if (n_so <= 0 || n_so > 14) throw Error("full Fock space limited to 14 spin orbitals");
    SectorSpace s;
    s.n_so_ = n_so;
    const std::uint64_t top = std::uint64_t{1} << n_so;
    s.dets_.resize(top);
    s.lookup_.resize(top);
    for (std::uint64_t m = 0; m < top; ++m) {
        s.dets_[m] = m;
        s.lookup_[m] = static_cast<int>(m);
    }
    return s;
}

int SectorSpace::index_of(std::uint64_t mask) const {
    if (mask >= lookup_.size()) return -1;
    return lookup_[mask];
}

CVec SectorSpace::det_state(const std::vector<int>& occ) const {
    std::uint64_t mask = 0;
    for (int p : occ) {
        if (p < 0 || p >= n_so_) throw Error("orbital label out of range");
        mask |= std::uint64_t{1} << p;
    }
    if (popcount(mask) != static_cast<int>(occ.size()))
        throw Error("repeated orbital in determinant");
    const int i = index_of(mask);
    if (i < 0) throw Error("determinant outside the sector");
    CVec v = CVec::Zero(dim());
    v[i] = 1.0;
    return v;
}

CMat SectorSpace::apdaq(int p, int q) const {
    CMat m = CMat::Zero(dim(), dim());
    for (int j = 0; j < dim(); ++j) {
        const auto a = annihilate(dets_[j], q);
        if (a.phase == 0.0) continue;
        const auto c = create(a.mask, p);
        if (c.phase == 0.0) continue;
        const int i = index_of(c.mask);
        if (i >= 0) m(i, j) += a.phase * c.phase;
    }
    return m;
}

CMat SectorSpace::one_body(const CMat& k) const {
    if (k.rows() != n_so_ || k.cols() != n_so_) throw Error("one-body matrix has wrong size");
    CMat m = CMat::Zero(dim(), dim());
    for (int j = 0; j < dim(); ++j)
        for (int q = 0; q < n_so_; ++q) {
            const auto a = annihilate(dets_[j], q);
            if (a.phase == 0.0) continue;
            for (int p = 0; p < n_so_; ++p) {
                if (k(p, q) == cplx(0.0, 0.0)) continue;
                const auto c = create(a.mask, p);
                if (c.phase == 0.0) continue;
                const int i = index_of(c.mask);
                if (i >= 0) m(i, j) += k(p, q) * a.phase * c.phase;
            }
        }
    return m;
}

CMat SectorSpace::rotation_operator(const CMat& k) const {
    if ((k + k.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw Error("rotation generator must be anti-Hermitian");
    return one_body(k).exp();
}

CMat SectorSpace::hamiltonian(const CMat& h, const Tensor4& g, double e_nuc) const {
    if (h.rows() != n_so_ || g.dim() != n_so_) throw Error("integral dimensions do not match");
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw Error("one-body integrals must be Hermitian");
    for (int p = 0; p < n_so_; ++p)
        for (int q = 0; q < n_so_; ++q)
            for (int r = 0; r < n_so_; ++r)
                for (int s = 0; s < n_so_; ++s)
                    if (std::abs(g(p, q, r, s) - g(r, s, p, q)) > 1e-10)
                        throw Error("two-body integrals must be Hermitian");
    CMat m = CMat::Zero(dim(), dim());
    std::vector<int> occ_i, occ_j;
    for (int j = 0; j < dim(); ++j) {
        const std::uint64_t mj = dets_[j];
        occ_j.clear();
        for (int p = 0; p < n_so_; ++p)
            if (mj >> p & 1) occ_j.push_back(p);

        cplx diag = e_nuc;
        for (int p : occ_j) {
            diag += h(p, p);
            for (int q : occ_j) diag += 0.5 * (g(p, q, p, q) - g(p, q, q, p));
        }
        m(j, j) += diag;

        for (int i = 0; i < dim(); ++i) {
            if (i == j) continue;
            const std::uint64_t mi = dets_[i];
            if (popcount(mi) != popcount(mj)) continue;
            const std::uint64_t diff = mi ^ mj;
            const int nd = popcount(diff);
            if (nd == 2) {
                // single excitation p -> q with p in j only, q in i only
                const int p = std::countr_zero(diff & mj);
                const int q = std::countr_zero(diff & mi);
                const auto a = annihilate(mj, p);
                const auto c = create(a.mask, q);
                const double ph = a.phase * c.phase;
                cplx val = h(q, p);
                for (int r : occ_j)
                    if (r != p) val += g(q, r, p, r) - g(q, r, r, p);
                m(i, j) += ph * val;
            } else if (nd == 4) {
                // double excitation {p,q} -> {r,s}
                const std::uint64_t rem = diff & mj;
                const std::uint64_t add = diff & mi;
                if (popcount(rem) != 2) continue;
                const int p = std::countr_zero(rem);
                const int q = std::countr_zero(rem ^ (std::uint64_t{1} << p));
                const int s = std::countr_zero(add);
                const int r = std::countr_zero(add ^ (std::uint64_t{1} << s));
                auto st = annihilate(mj, p);
                double ph = st.phase;
                st = annihilate(st.mask, q);
                ph *= st.phase;
                st = create(st.mask, s);
                ph *= st.phase;
                st = create(st.mask, r);
                ph *= st.phase;
                m(i, j) += ph * (g(r, s, p, q) - g(r, s, q, p));
            }
        }
    }
    return m;
}

CMat SectorSpace::s2_operator() const {
    if (n_so_ % 2 != 0) throw Error("total spin needs an even spin-orbital count");
    const int n = n_so_ / 2;
    CMat m = CMat::Zero(dim(), dim());
    for (int j = 0; j < dim(); ++j) {
        const std::uint64_t mj = dets_[j];
        const double ms =
            0.5 * (popcount(mj & ((std::uint64_t{1} << n) - 1)) - popcount(mj >> n));
        m(j, j) += ms * (ms + 1.0);
        // S- S+ with S+ = sum_p a+_{p,alpha} a_{p,beta}
        for (int p = 0; p < n; ++p) {
            const auto a1 = annihilate(mj, n + p);
            if (a1.phase == 0.0) continue;
            const auto c1 = create(a1.mask, p);
            if (c1.phase == 0.0) continue;
            for (int q = 0; q < n; ++q) {
                const auto a2 = annihilate(c1.mask, q);
                if (a2.phase == 0.0) continue;
                const auto c2 = create(a2.mask, n + q);
                if (c2.phase == 0.0) continue;
                const int i = index_of(c2.mask);
                if (i >= 0) m(i, j) += a1.phase * c1.phase * a2.phase * c2.phase;
            }
        }
    }
    return m;
}

namespace {

// tau+ = sum over supermatrix entries of t[pN+q, rN+s] a+_p a_q a+_r a_s,
// each string applied rightmost first so intermediates may leave the sector.
CMat cluster_plus_impl(const SectorSpace& sec, const Mat& t_super) {
    const int N = sec.n_so();
    if (t_super.rows() != static_cast<Eigen::Index>(N) * N || t_super.rows() != t_super.cols())
        throw Error("supermatrix does not match the orbital count");
    CMat m = CMat::Zero(sec.dim(), sec.dim());
    for (int p = 0; p < N; ++p)
        for (int q = 0; q < N; ++q)
            for (int r = 0; r < N; ++r)
                for (int s = 0; s < N; ++s) {
                    const double t = t_super(p * N + q, r * N + s);
                    if (t == 0.0) continue;
                    for (int j = 0; j < sec.dim(); ++j) {
                        auto st = annihilate(sec.det(j), s);
                        if (st.phase == 0.0) continue;
                        double ph = st.phase;
                        st = create(st.mask, r);
                        if (st.phase == 0.0) continue;
                        ph *= st.phase;
                        st = annihilate(st.mask, q);
                        if (st.phase == 0.0) continue;
                        ph *= st.phase;
                        st = create(st.mask, p);
                        if (st.phase == 0.0) continue;
                        ph *= st.phase;
                        const int i = sec.index_of(st.mask);
                        if (i < 0) continue;
                        m(i, j) += t * ph;
                    }
                }
    return m;
}

}  // namespace

CMat SectorSpace::cluster_operator(const Mat& t_super) const {
    const CMat plus = cluster_plus_impl(*this, t_super);
    return plus - plus.adjoint();
}

CMat SectorSpace::cluster_plus_operator(const Mat& t_super) const {
    return cluster_plus_impl(*this, t_super);
}

CMat SectorSpace::h0_diagonal(const Vec& eps_spin, const std::vector<int>& ref_occ,
                              double e_ref) const {
    if (eps_spin.size() != n_so_) throw Error("orbital energies do not match the orbital count");
    double shift = e_ref;
    for (int p : ref_occ) shift -= eps_spin[p];
    CMat m = CMat::Zero(dim(), dim());
    for (int j = 0; j < dim(); ++j) {
        double e = shift;
        for (int p = 0; p < n_so_; ++p)
            if (dets_[j] >> p & 1) e += eps_spin[p];
        m(j, j) = e;
    }
    return m;
}

CVec apply_cluster_exact(const SectorSpace& sec, const Mat& t_super, const CVec& state) {
    const CMat tau = sec.cluster_operator(t_super);
    Eigen::SelfAdjointEigenSolver<CMat> es(cplx(0.0, 1.0) * tau);
    if (es.info() != Eigen::Success) throw Error("cluster generator diagonalization failed");
    const CVec phases =
        (cplx(0.0, -1.0) * es.eigenvalues().cast<cplx>()).array().exp().matrix();
    return es.eigenvectors() * phases.cwiseProduct(es.eigenvectors().adjoint() * state);
}

namespace {

// Cached exact factor e^{scale tau_l} through the eigensystem of i tau_l.
struct ValueFactor {
    CMat vecs;
    Vec lam;

    CVec apply(double scale, const CVec& x) const {
        CVec c = vecs.adjoint() * x;
        for (Eigen::Index i = 0; i < c.size(); ++i)
            c[i] *= std::exp(cplx(0.0, -scale * lam[i]));
        return vecs * c;
    }
};

struct SplitDressing {
    std::vector<ValueFactor> factors;

    void forward(double scale, CVec& x) const {
        for (const auto& f : factors) x = f.apply(scale, x);
    }
    void backward(double scale, CVec& x) const {
        for (auto it = factors.rbegin(); it != factors.rend(); ++it) x = it->apply(scale, x);
    }
    void strang(double scale, CVec& x) const {
        forward(0.5 * scale, x);
        backward(0.5 * scale, x);
    }
    void suzuki(int order, double scale, CVec& x) const {
        if (order == 2) {
            strang(scale, x);
            return;
        }
        const double pj = 1.0 / (4.0 - std::pow(4.0, 1.0 / (order - 1)));
        suzuki(order - 2, pj * scale, x);
        suzuki(order - 2, pj * scale, x);
        suzuki(order - 2, (1.0 - 4.0 * pj) * scale, x);
        suzuki(order - 2, pj * scale, x);
        suzuki(order - 2, pj * scale, x);
    }
};

}  // namespace

CVec apply_cluster_lowrank(const SectorSpace& sec, const Factorization& f, const CVec& state,
                           int k_steps, int suzuki_order) {
    if (k_steps < 1) throw Error("step count must be positive");
    if (suzuki_order != 1 && suzuki_order != 2 && suzuki_order != 4 && suzuki_order != 6)
        throw Error("supported product-formula orders are 1, 2, 4 and 6");
    const int N = f.N;
    SplitDressing split;
    split.factors.reserve(f.L());
    for (int l = 0; l < f.L(); ++l) {
        Mat x;
        if (f.method == FactorMethod::takagi)
            x = f.w[l] * f.U.col(l) * f.U.col(l).transpose();
        else
            x = f.sigma[l] * f.U.col(l) * f.V.col(l).transpose();
        if (x.rows() != static_cast<Eigen::Index>(N) * N)
            throw Error("factorization does not match the orbital count");
        const CMat tau = sec.cluster_operator(x);
        Eigen::SelfAdjointEigenSolver<CMat> es(cplx(0.0, 1.0) * tau);
        if (es.info() != Eigen::Success) throw Error("factor diagonalization failed");
        split.factors.push_back({es.eigenvectors(), es.eigenvalues()});
    }
    CVec out = state;
    const double scale = 1.0 / k_steps;
    for (int k = 0; k < k_steps; ++k) {
        if (suzuki_order == 1)
            split.forward(scale, out);
        else
            split.suzuki(suzuki_order, scale, out);
    }
    return out;
}

CVec apply_ucj(const SectorSpace& sec, const std::vector<UcjLayer>& layers, const CVec& state) {
    const int N = sec.n_so();
    CVec out = state;
    for (const auto& layer : layers) {
        if (layer.k.rows() != N || layer.jmat.rows() != N || layer.jmat.cols() != N)
            throw Error("layer dimensions do not match the orbital count");
        const CMat rot = sec.rotation_operator(layer.k);
        out = rot.adjoint() * out;
        // diagonal Jastrow factor exp(-i sum_pq J(p,q) n_p n_q)
        for (int j = 0; j < sec.dim(); ++j) {
            double angle = 0.0;
            for (int p = 0; p < N; ++p) {
                if (!(sec.det(j) >> p & 1)) continue;
                for (int q = 0; q < N; ++q)
                    if (sec.det(j) >> q & 1) angle += layer.jmat(p, q);
            }
            out[j] *= std::exp(cplx(0.0, -angle));
        }
        out = rot * out;
    }
    return out;
}

PairElements matrix_elements(const CMat& hmat, const CVec& bra, const CVec& ket) {
    return {bra.dot(hmat * ket), bra.dot(ket)};
}

namespace {

void cswap_registers(CVec& psi, int nq) {
    const std::int64_t dim_r = std::int64_t{1} << nq;
    const std::int64_t anc = dim_r * dim_r;
    for (std::int64_t r2 = 0; r2 < dim_r; ++r2)
        for (std::int64_t r1 = 0; r1 < r2; ++r1)
            std::swap(psi[anc + r2 * dim_r + r1], psi[anc + r1 * dim_r + r2]);
}

// <Z_anc (x) A_reg1> after the closing Hadamard on the ancilla.
double z_expectation(const CVec& psi, const CMat& a, int nq) {
    const std::int64_t dim_r = std::int64_t{1} << nq;
    const std::int64_t anc = dim_r * dim_r;
    double z = 0.0;
    for (int side = 0; side < 2; ++side) {
        const double sign = side == 0 ? 1.0 : -1.0;
        for (std::int64_t r2 = 0; r2 < dim_r; ++r2) {
            const Eigen::Map<const CVec> slice(psi.data() + side * anc + r2 * dim_r, dim_r);
            z += sign * std::real(slice.dot(a * slice));
        }
    }
    return z;
}

}  // namespace

PairElements hadamard_test_oracle(int n_so, const CMat& h, const Tensor4& g, double e_nuc,
                                  std::uint64_t occ_mask, const CMat& dress_bra,
                                  const CMat& dress_ket) {
    const SectorSpace full = SectorSpace::full_space(n_so);
    const std::int64_t dim_r = std::int64_t{1} << n_so;
    if (dress_bra.rows() != dim_r || dress_ket.rows() != dim_r)
        throw Error("dressings must act on the full Fock space");
    if (occ_mask >= static_cast<std::uint64_t>(dim_r)) throw Error("occupation mask out of range");
    const CMat hmat = full.hamiltonian(h, g, e_nuc);
    const std::int64_t anc = dim_r * dim_r;
    const CMat ident = CMat::Identity(dim_r, dim_r);

    double zx[2] = {0.0, 0.0}, zy[2] = {0.0, 0.0};  // 0: A = identity, 1: A = Hamiltonian
    for (int run = 0; run < 2; ++run) {
        const cplx c = run == 0 ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
        CVec psi = CVec::Zero(2 * anc);
        psi[static_cast<std::int64_t>(occ_mask)] = 1.0 / std::sqrt(2.0);
        psi[anc + static_cast<std::int64_t>(occ_mask)] = c / std::sqrt(2.0);

        cswap_registers(psi, n_so);
        // ket dressing on register 1 (contiguous slices), bra on register 2
        for (std::int64_t base = 0; base < 2 * anc; base += dim_r) {
            Eigen::Map<CVec> slice(psi.data() + base, dim_r);
            slice = dress_ket * slice;
        }
        for (int side = 0; side < 2; ++side)
            for (std::int64_t r1 = 0; r1 < dim_r; ++r1) {
                Eigen::Map<CVec, 0, Eigen::InnerStride<>> slice(
                    psi.data() + side * anc + r1, dim_r, Eigen::InnerStride<>(dim_r));
                slice = dress_bra * slice;
            }
        cswap_registers(psi, n_so);
        // closing Hadamard on the ancilla
        for (std::int64_t i = 0; i < anc; ++i) {
            const cplx a0 = psi[i], a1 = psi[anc + i];
            psi[i] = (a0 + a1) / std::sqrt(2.0);
            psi[anc + i] = (a0 - a1) / std::sqrt(2.0);
        }
        double* out = run == 0 ? zx : zy;
        out[0] = z_expectation(psi, ident, n_so);
        out[1] = z_expectation(psi, hmat, n_so);
    }
    return {cplx(zx[1], zy[1]), cplx(zx[0], zy[0])};
}

FciResult fci_solve(const SectorSpace& sec, const CMat& h, const Tensor4& g, double e_nuc,
                    int n_roots) {
    Eigen::SelfAdjointEigenSolver<CMat> es(sec.hamiltonian(h, g, e_nuc));
    if (es.info() != Eigen::Success) throw Error("FCI diagonalization failed");
    const int nr = n_roots < 0 ? sec.dim() : std::min(n_roots, sec.dim());
    FciResult out;
    out.energies = es.eigenvalues().head(nr);
    out.vectors = es.eigenvectors().leftCols(nr);
    const CMat s2 = sec.s2_operator();
    out.s2 = Vec(nr);
    for (int k = 0; k < nr; ++k)
        out.s2[k] = std::real(out.vectors.col(k).dot(s2 * out.vectors.col(k)));
    return out;
}

}  // namespace noqe
