#include "noqe/scf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

namespace noqe {

namespace {

Mat inv_sqrt_sym(const Mat& s) {
    Eigen::SelfAdjointEigenSolver<Mat> es(s);
    if (es.info() != Eigen::Success) throw Error("overlap eigendecomposition failed");
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw Error("overlap matrix is not positive definite");
    return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
}

void build_fock(const IntegralSet& ints, const Mat& Da, const Mat& Db, Mat& Fa, Mat& Fb) {
    const int n = ints.nbf;
    const Mat Dt = Da + Db;
    Mat J = Mat::Zero(n, n), Ka = Mat::Zero(n, n), Kb = Mat::Zero(n, n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            double j = 0.0, ka = 0.0, kb = 0.0;
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s) {
                    j += ints.eri(p, q, r, s) * Dt(r, s);
                    ka += ints.eri(p, r, q, s) * Da(r, s);
                    kb += ints.eri(p, r, q, s) * Db(r, s);
                }
            J(p, q) = j;
            Ka(p, q) = ka;
            Kb(p, q) = kb;
        }
    const Mat h = ints.hcore();
    Fa = h + J - Ka;
    Fb = h + J - Kb;
}

void fix_phases(Mat& c) {
    for (int j = 0; j < c.cols(); ++j) {
        int imax = 0;
        c.col(j).cwiseAbs().maxCoeff(&imax);
        if (c(imax, j) < 0.0) c.col(j) *= -1.0;
    }
}

}  // namespace

ScfResult run_scf(const IntegralSet& ints, const ScfOptions& opt, const Mat* Ca0,
                  const Mat* Cb0) {
    const int n = ints.nbf;
    if (opt.na < 0 || opt.nb < 0 || opt.na > n || opt.nb > n)
        throw Error("electron counts out of range for basis size");
    const Mat S = ints.S;
    const Mat h = ints.hcore();
    const Mat X = inv_sqrt_sym(S);

    auto diag = [&X](const Mat& f, Vec& e, Mat& c) {
        Eigen::SelfAdjointEigenSolver<Mat> es(X.transpose() * f * X);
        if (es.info() != Eigen::Success) throw Error("Fock diagonalization failed");
        e = es.eigenvalues();
        c = X * es.eigenvectors();
    };

    ScfResult res;
    res.na = opt.na;
    res.nb = opt.nb;
    if (Ca0) {
        res.Ca = *Ca0;
        res.Cb = Cb0 ? *Cb0 : *Ca0;
    } else {
        diag(h, res.ea, res.Ca);
        res.Cb = res.Ca;
        res.eb = res.ea;
    }

    auto density = [](const Mat& c, int nocc) {
        if (nocc == 0) return Mat::Zero(c.rows(), c.rows()).eval();
        return (c.leftCols(nocc) * c.leftCols(nocc).transpose()).eval();
    };
    Mat Da = density(res.Ca, opt.na);
    Mat Db = density(res.Cb, opt.nb);

    std::deque<Vec> errs;
    std::deque<std::pair<Mat, Mat>> focks;
    Mat Fa, Fb;
    for (int it = 0; it < opt.max_iter; ++it) {
        build_fock(ints, Da, Db, Fa, Fb);
        if (opt.restricted) Fa = Fb = (0.5 * (Fa + Fb)).eval();
        res.E = 0.5 * ((Da.array() * (h + Fa).array()).sum() +
                       (Db.array() * (h + Fb).array()).sum()) +
                ints.e_nuc;
        const Mat ga = X.transpose() * (Fa * Da * S - S * Da * Fa) * X;
        const Mat gb = X.transpose() * (Fb * Db * S - S * Db * Fb) * X;
        res.gnorm = std::sqrt(ga.squaredNorm() + gb.squaredNorm());
        res.iters = it;
        if (res.gnorm < opt.conv) {
            diag(Fa, res.ea, res.Ca);
            diag(Fb, res.eb, res.Cb);
            res.converged = true;
            fix_phases(res.Ca);
            fix_phases(res.Cb);
            return res;
        }

        Vec err(2 * n * n);
        err << Eigen::Map<const Vec>(ga.data(), n * n), Eigen::Map<const Vec>(gb.data(), n * n);
        errs.push_back(err);
        focks.emplace_back(Fa, Fb);
        if (static_cast<int>(errs.size()) > 8) {
            errs.pop_front();
            focks.pop_front();
        }
        const int m = static_cast<int>(errs.size());
        if (m > 1) {
            Mat B = Mat::Constant(m + 1, m + 1, -1.0);
            B(m, m) = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) B(i, j) = errs[i].dot(errs[j]);
            Vec rhs = Vec::Zero(m + 1);
            rhs[m] = -1.0;
            Eigen::FullPivLU<Mat> lu(B);
            if (lu.isInvertible()) {
                const Vec w = lu.solve(rhs).head(m);
                Mat Fa_x = Mat::Zero(n, n), Fb_x = Mat::Zero(n, n);
                for (int i = 0; i < m; ++i) {
                    Fa_x += w[i] * focks[i].first;
                    Fb_x += w[i] * focks[i].second;
                }
                Fa = Fa_x;
                Fb = Fb_x;
            }
        }
        if (opt.level_shift > 0.0) {
            // raise the virtual manifold of the current density; the gradient
            // above stays that of the unshifted operator
            Fa += opt.level_shift * (S - S * Da * S);
            Fb += opt.level_shift * (S - S * Db * S);
        }
        diag(Fa, res.ea, res.Ca);
        diag(Fb, res.eb, res.Cb);
        const Mat Da_new = density(res.Ca, opt.na);
        const Mat Db_new = density(res.Cb, opt.nb);
        const double d = it < opt.damp_iters ? opt.damp : 0.0;
        Da = d * Da + (1.0 - d) * Da_new;
        Db = d * Db + (1.0 - d) * Db_new;
    }
    res.converged = false;
    fix_phases(res.Ca);
    fix_phases(res.Cb);
    return res;
}

double s_squared_det(const Mat& S, const Mat& Ca, const Mat& Cb, int na, int nb) {
    const double ms = 0.5 * (na - nb);
    if (na == 0 || nb == 0) return ms * (ms + 1.0);
    const Mat ov = Ca.leftCols(na).transpose() * S * Cb.leftCols(nb);
    return ms * (ms + 1.0) + nb - ov.squaredNorm();
}

Mat boys_localize(const std::array<Mat, 3>& dipole, const Mat& c_occ) {
    Mat c = c_occ;
    const int no = static_cast<int>(c.cols());
    auto rval = [&](int i, int j, int x) { return c.col(i).dot(dipole[x] * c.col(j)); };
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < no; ++i)
            for (int j = i + 1; j < no; ++j) {
                Eigen::Vector3d u, v;
                for (int x = 0; x < 3; ++x) {
                    u[x] = rval(i, i, x) - rval(j, j, x);
                    v[x] = rval(i, j, x);
                }
                const double A = 0.25 * u.dot(u) - v.dot(v);
                const double B = u.dot(v);
                if (std::hypot(A, B) < 1e-14) continue;
                // the objective varies as 0.5 A cos 4t + 0.5 B sin 4t
                const double th = 0.25 * std::atan2(B, A);
                const Vec ci = std::cos(th) * c.col(i) + std::sin(th) * c.col(j);
                const Vec cj = -std::sin(th) * c.col(i) + std::cos(th) * c.col(j);
                c.col(i) = ci;
                c.col(j) = cj;
                off += std::abs(th);
            }
        if (off < 1e-12) break;
    }
    return c;
}

Vec mulliken_populations(const Mat& S, const AOBasis& basis, const Vec& c) {
    Vec q = Vec::Zero(basis.n_atoms());
    const Vec sc = S * c;
    for (int mu = 0; mu < basis.nbf(); ++mu) q[basis.atom_of(mu)] += c[mu] * sc[mu];
    return q;
}

Mat complete_virtuals(const Mat& S, const Mat& c_occ) {
    const int n = static_cast<int>(S.rows());
    const int nocc = static_cast<int>(c_occ.cols());
    const Mat X = inv_sqrt_sym(S);
    const Mat cand = X - c_occ * c_occ.transpose() * S * X;
    Eigen::SelfAdjointEigenSolver<Mat> es(cand.transpose() * S * cand);
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (es.eigenvalues()[i] > 1e-8) keep.push_back(i);
    const int nv = n - nocc;
    if (static_cast<int>(keep.size()) < nv)
        throw Error("virtual completion lost rank");
    Mat full(n, n);
    full.leftCols(nocc) = c_occ;
    for (int k = 0; k < nv; ++k) {
        const int idx = keep[keep.size() - nv + k];
        full.col(nocc + k) =
            cand * es.eigenvectors().col(idx) / std::sqrt(es.eigenvalues()[idx]);
    }
    return full;
}

namespace {

std::vector<std::vector<int>> site_patterns(int d, int na) {
    // combinations in lexicographic order
    std::vector<std::vector<int>> out;
    std::vector<int> idx(na);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        out.push_back(idx);
        int i = na - 1;
        while (i >= 0 && idx[i] == d - na + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < na; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

}  // namespace

ReferenceSet generate_references(const IntegralSet& ints, const AOBasis& basis, int d,
                                 double loc_threshold) {
    if (d < 2 || d % 2 != 0) throw Error("reference generation needs an even site count");
    ReferenceSet set;

    ScfOptions rhf_opt;
    rhf_opt.na = rhf_opt.nb = d / 2;
    rhf_opt.restricted = true;
    const ScfResult rhf = run_scf(ints, rhf_opt);
    if (!rhf.converged) throw Error("restricted SCF did not converge");
    set.e_rhf = rhf.E;

    ScfOptions hs_opt;
    hs_opt.na = d;
    hs_opt.nb = 0;
    set.high_spin = run_scf(ints, hs_opt);
    if (!set.high_spin.converged) throw Error("high-spin SCF did not converge");

    const Mat loc = boys_localize(ints.dipole, set.high_spin.Ca.leftCols(d));
    std::vector<int> sites(d);
    set.localization_clean = true;
    for (int i = 0; i < d; ++i) {
        const Vec q = mulliken_populations(ints.S, basis, loc.col(i));
        int arg = 0;
        q.maxCoeff(&arg);
        sites[i] = arg;
        if (q.maxCoeff() < loc_threshold) set.localization_clean = false;
    }
    if (std::set<int>(sites.begin(), sites.end()).size() != static_cast<std::size_t>(d))
        throw Error("localized orbitals do not map one-to-one onto sites");
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&sites](int a, int b) { return sites[a] < sites[b]; });
    Mat lo(loc.rows(), d);
    for (int i = 0; i < d; ++i) lo.col(i) = loc.col(order[i]);

    const int na = d / 2;
    std::vector<std::vector<int>> patterns;
    if (d == 4)
        patterns = {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {0, 3}, {1, 3}};
    else
        patterns = site_patterns(d, na);

    for (const auto& alpha : patterns) {
        std::vector<int> beta;
        for (int s = 0; s < d; ++s)
            if (std::find(alpha.begin(), alpha.end(), s) == alpha.end()) beta.push_back(s);
        Mat ca_occ(lo.rows(), na), cb_occ(lo.rows(), d - na);
        for (int k = 0; k < na; ++k) ca_occ.col(k) = lo.col(alpha[k]);
        for (std::size_t k = 0; k < beta.size(); ++k) cb_occ.col(k) = lo.col(beta[k]);
        const Mat ca0 = complete_virtuals(ints.S, ca_occ);
        const Mat cb0 = complete_virtuals(ints.S, cb_occ);
        ScfOptions opt;
        opt.na = na;
        opt.nb = d - na;
        opt.damp = 0.7;
        ScfResult r = run_scf(ints, opt, &ca0, &cb0);
        if (!r.converged) r = polish_reference(ints, r);
        if (!r.converged) throw Error("reference SCF did not converge");
        Reference ref;
        ref.scf = std::move(r);
        ref.alpha_sites = alpha;
        const std::set<int> sset(alpha.begin(), alpha.end());
        ref.diagonal_class = d == 4 && (sset == std::set<int>{0, 2} || sset == std::set<int>{1, 3});
        set.refs.push_back(std::move(ref));
    }

    double emin = set.refs[0].scf.E;
    for (const auto& r : set.refs) emin = std::min(emin, r.scf.E);
    set.broken = emin < set.e_rhf - 1e-8;
    return set;
}

ScfResult polish_reference(const IntegralSet& ints, const ScfResult& start) {
    struct Attempt {
        double damp;
        double shift;
    };
    const Attempt ladder[] = {{0.9, 0.0}, {0.7, 0.2}, {0.8, 0.5}, {0.9, 1.0}};
    ScfResult best = start;
    for (const Attempt& a : ladder) {
        ScfOptions opt;
        opt.na = start.na;
        opt.nb = start.nb;
        opt.max_iter = 500;
        opt.damp = a.damp;
        opt.damp_iters = 100;
        opt.level_shift = a.shift;
        ScfResult r = run_scf(ints, opt, &start.Ca, &start.Cb);
        if (r.converged) return r;
        if (r.gnorm < best.gnorm) best = r;
    }
    return best;
}

double detect_cf_point(const std::function<bool(double)>& broken, double r_lo, double r_hi,
                       double coarse_step, double width) {
    if (broken(r_lo)) throw Error("CF search: symmetry already broken at the lower bound");
    double lo = r_lo;
    double hi = r_lo;
    bool found = false;
    for (int i = 1; !found; ++i) {
        hi = r_lo + i * coarse_step;
        if (hi > r_hi + 1e-12) throw Error("CF search: no symmetry breaking up to upper bound");
        if (broken(hi))
            found = true;
        else
            lo = hi;
    }
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        if (broken(mid))
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace noqe
