#include "noqe/lowrank.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace noqe {

namespace {

// Reshape an N^2 slot vector into its N x N coefficient matrix.
template <typename V>
auto slot_matrix(const V& u, int N) {
    using Scalar = typename V::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(N, N);
    for (int p = 0; p < N; ++p)
        for (int q = 0; q < N; ++q) m(p, q) = u[p * N + q];
    return m;
}

void fix_column_sign(Mat& u, int col, Mat* v = nullptr) {
    for (int r = 0; r < u.rows(); ++r) {
        if (std::abs(u(r, col)) <= 1e-12) continue;
        if (u(r, col) < 0.0) {
            u.col(col) *= -1.0;
            if (v) v->col(col) *= -1.0;
        }
        return;
    }
}

int vec_nnz(const Vec& u, double tol) {
    int n = 0;
    for (Eigen::Index i = 0; i < u.size(); ++i)
        if (std::abs(u[i]) > tol) ++n;
    return n;
}

// Per-value weight nnz_eff = (sqrt nnz(u) + sqrt nnz(v))^2 / 4, which reduces
// to nnz(u) for the Takagi branch where u and v coincide.
double nnz_weight(const Factorization& f, int l, double tol) {
    const double nu = vec_nnz(f.U.col(l), tol);
    const double nv =
        f.method == FactorMethod::takagi ? nu : static_cast<double>(vec_nnz(f.V.col(l), tol));
    const double s = std::sqrt(nu) + std::sqrt(nv);
    return 0.25 * s * s;
}

}  // namespace

double Factorization::tail(int keep) const {
    double acc = discarded * discarded;
    for (int l = L() - 1; l >= keep; --l) acc += sigma[l] * sigma[l];
    return std::sqrt(acc);
}

Factorization factorize(const Mat& t, FactorMethod method, double tol) {
    if (t.rows() != t.cols()) throw Error("supermatrix must be square");
    const int N = static_cast<int>(std::lround(std::sqrt(static_cast<double>(t.rows()))));
    if (static_cast<Eigen::Index>(N) * N != t.rows())
        throw Error("supermatrix side is not a perfect square");

    Factorization f;
    f.method = method;
    f.N = N;
    if (method == FactorMethod::takagi) {
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (t + t.transpose()));
        if (es.info() != Eigen::Success) throw Error("supermatrix eigendecomposition failed");
        const Vec& w = es.eigenvalues();
        std::vector<int> idx(w.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&w](int a, int b) {
            return std::abs(w[a]) > std::abs(w[b]);
        });
        int keep = 0;
        while (keep < static_cast<int>(idx.size()) && std::abs(w[idx[keep]]) > tol) ++keep;
        f.sigma = Vec(keep);
        f.w = Vec(keep);
        f.U = Mat(t.rows(), keep);
        for (int l = 0; l < keep; ++l) {
            f.w[l] = w[idx[l]];
            f.sigma[l] = std::abs(w[idx[l]]);
            f.U.col(l) = es.eigenvectors().col(idx[l]);
            fix_column_sign(f.U, l);
        }
    } else {
        Eigen::BDCSVD<Mat> svd(t, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Vec& s = svd.singularValues();
        int keep = 0;
        while (keep < s.size() && s[keep] > tol) ++keep;
        f.sigma = s.head(keep);
        f.U = svd.matrixU().leftCols(keep);
        f.V = svd.matrixV().leftCols(keep);
        for (int l = 0; l < keep; ++l) fix_column_sign(f.U, l, &f.V);
    }
    return f;
}

int l2_truncation_rank(const Vec& sigma, double eps) {
    const int n = static_cast<int>(sigma.size());
    std::vector<double> tail2(n + 1, 0.0);
    for (int l = n - 1; l >= 0; --l) tail2[l] = tail2[l + 1] + sigma[l] * sigma[l];
    for (int l = 0; l <= n; ++l)
        if (std::sqrt(tail2[l]) <= eps) return l;
    return n;
}

Factorization truncate(const Factorization& f, double eps) {
    int keep = 0;
    while (keep <= f.L() && f.tail(keep) > eps) ++keep;
    keep = std::min(keep, f.L());
    Factorization out;
    out.method = f.method;
    out.N = f.N;
    out.discarded = f.tail(keep);
    out.sigma = f.sigma.head(keep);
    out.U = f.U.leftCols(keep);
    if (f.method == FactorMethod::takagi)
        out.w = f.w.head(keep);
    else
        out.V = f.V.leftCols(keep);
    return out;
}

Mat reconstruct_supermatrix(const Factorization& f) {
    if (f.method == FactorMethod::takagi)
        return f.U * f.w.asDiagonal() * f.U.transpose();
    return f.U * f.sigma.asDiagonal() * f.V.transpose();
}

std::vector<FactorBlock> factor_blocks(const Factorization& f) {
    std::vector<FactorBlock> blocks;
    blocks.reserve(static_cast<std::size_t>(f.m()) * f.L());
    const cplx i1(0.0, 1.0);
    for (int l = 0; l < f.L(); ++l) {
        const double rs = std::sqrt(f.sigma[l]);
        CMat m, nn;
        if (f.method == FactorMethod::takagi) {
            // Takagi vector: real eigenvector for w >= 0, i times it for w < 0,
            // so that T^S = sum sigma u u^T; the conjugate partner coincides
            // with u and the N block vanishes.
            CVec u = f.U.col(l).cast<cplx>();
            if (f.w[l] < 0.0) u *= i1;
            m = 2.0 * rs * slot_matrix(u, f.N);
        } else {
            const Mat mu_ = slot_matrix(Vec(f.U.col(l)), f.N);
            const Mat mv = slot_matrix(Vec(f.V.col(l)), f.N);
            m = (rs * (mu_ + mv)).cast<cplx>();
            nn = (rs * (mu_ - mv)).cast<cplx>();
        }
        const CMat mdag = m.adjoint();
        FactorBlock b1;
        b1.y = 0.25 * (1.0 + i1) * (m - i1 * mdag);
        b1.sign = 1.0;
        b1.sigma = f.sigma[l];
        b1.l = l;
        b1.mu = 0;
        blocks.push_back(std::move(b1));
        FactorBlock b2;
        b2.y = 0.25 * (1.0 - i1) * (m + i1 * mdag);  // -i times the raw block
        b2.sign = -1.0;
        b2.sigma = f.sigma[l];
        b2.l = l;
        b2.mu = 1;
        blocks.push_back(std::move(b2));
        if (f.method == FactorMethod::svd) {
            const CMat ndag = nn.adjoint();
            FactorBlock b3;
            b3.y = -0.25 * (1.0 + i1) * (nn - i1 * ndag);  // -i times the raw block
            b3.sign = -1.0;
            b3.sigma = f.sigma[l];
            b3.l = l;
            b3.mu = 2;
            blocks.push_back(std::move(b3));
            FactorBlock b4;
            b4.y = 0.25 * (1.0 - i1) * (nn + i1 * ndag);
            b4.sign = 1.0;
            b4.sigma = f.sigma[l];
            b4.l = l;
            b4.mu = 3;
            blocks.push_back(std::move(b4));
        }
    }
    return blocks;
}

double y_norm_bound(const Factorization& f, int l, double nnz_tol) {
    const double nu = vec_nnz(f.U.col(l), nnz_tol);
    const double nv =
        f.method == FactorMethod::takagi ? nu : static_cast<double>(vec_nnz(f.V.col(l), nnz_tol));
    return std::sqrt(f.sigma[l]) / (2.0 * std::sqrt(2.0)) * (std::sqrt(nu) + std::sqrt(nv));
}

double trotter_error_bound(const Factorization& f, int p, double nnz_tol) {
    if (p < 1) throw Error("product-formula order must be positive");
    double a = 0.0;
    for (int l = 0; l < f.L(); ++l) a += f.m() * nnz_weight(f, l, nnz_tol) * f.sigma[l];
    return std::pow(a / (2.0 * p), p + 1);
}

double truncation_unitary_bound(const Factorization& f, int keep_l, double nnz_tol) {
    double kept = 0.0, dropped = 0.0;
    for (int l = 0; l < f.L(); ++l) {
        const double g = f.m() * nnz_weight(f, l, nnz_tol) * f.sigma[l];
        (l < keep_l ? kept : dropped) += g;
    }
    return 0.5 * (1.0 + kept) * dropped;
}

ElementBounds matrix_element_bounds(int n_refs, double du, double h_norm) {
    ElementBounds b;
    b.dH = 2.0 * h_norm * du;
    b.dS = 2.0 * du;
    b.dH_mat = n_refs * b.dH;
    b.dS_mat = n_refs * b.dS;
    return b;
}

double eigenvalue_angle_bound(int n_refs, double du, double h_norm_u) {
    const double arg = 2.0 * n_refs * n_refs * du * std::sqrt(1.0 + h_norm_u * h_norm_u);
    return std::asin(std::min(arg, 1.0));
}

int min_trotter_order(const Factorization& f, int n_refs, double h_norm_u,
                      double dtheta_target, int p_max) {
    for (int p = 1; p <= p_max; ++p) {
        const double du = trotter_error_bound(f, p);
        if (eigenvalue_angle_bound(n_refs, du, h_norm_u) <= dtheta_target) return p;
    }
    return -1;
}

}  // namespace noqe
