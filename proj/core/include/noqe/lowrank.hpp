#pragma once

#include "noqe/types.hpp"

#include <vector>

namespace noqe {

enum class FactorMethod { takagi, svd };

// One squared-generator circuit block. The raw block operator is normal; it is
// stored as Y = phase * y with y Hermitian, so Y^2 = sign * y^2 with
// sign = phase^2 in {+1, -1} and the block factor is exp(-i sign y^2). Summed
// over all blocks, -i sum sign_k y_k^2 equals the cluster generator.
struct FactorBlock {
    CMat y;              // Hermitian coefficient matrix, Y = sum y_pq a+_p a_q
    double sign = 1.0;
    double sigma = 0.0;
    int l = 0;   // retained-value index
    int mu = 0;  // block index within l (0..m-1)
};

struct Factorization {
    FactorMethod method = FactorMethod::takagi;
    int N = 0;        // spin orbitals (supermatrix is N^2 x N^2)
    Vec sigma;        // descending
    Mat U;            // left vectors as columns (takagi: real eigenvectors)
    Mat V;            // right singular vectors (svd only)
    Vec w;            // signed eigenvalues (takagi only)
    double discarded = 0.0;  // l2 norm of values removed by earlier truncation

    int L() const { return static_cast<int>(sigma.size()); }
    int m() const { return method == FactorMethod::takagi ? 2 : 4; }

    // l2 norm of the discarded spectrum when keeping the first L values,
    // folding in values removed by earlier truncations; makes truncate at a
    // fixed eps idempotent.
    double tail(int keep) const;
};

// takagi: eigendecomposition of the symmetrized supermatrix, sigma = |w|, sorted
// descending, sign fixed first-nonzero-positive, values <= tol dropped.
// svd: plain SVD of the matrix as given (raw or symmetrized; caller's choice).
Factorization factorize(const Mat& t, FactorMethod method, double tol = 1e-12);

// Smallest L with tail(L) <= eps.
int l2_truncation_rank(const Vec& sigma, double eps);
Factorization truncate(const Factorization& f, double eps);

// X_L = U diag(w) U^T (takagi) or U diag(sigma) V^T (svd) over retained values.
Mat reconstruct_supermatrix(const Factorization& f);

// The m*L coefficient blocks of the squared-generator form; as operators,
// -i sum_l,mu sign * y^2 equals the cluster generator of the reconstructed
// supermatrix.
std::vector<FactorBlock> factor_blocks(const Factorization& f);

// ---- error bounds (operator 2-norm) ----

// ||Y_k|| <= sqrt(sigma)/(2 sqrt 2) (sqrt nnz(u) + sqrt nnz(v)).
double y_norm_bound(const Factorization& f, int l, double nnz_tol = 1e-12);

// Product-formula error of an order-p splitting of the mL blocks:
// ((1/2p) sum_k nnz(u_k) sigma_k)^(p+1), sum over all mL blocks.
double trotter_error_bound(const Factorization& f, int p, double nnz_tol = 1e-12);

// Unitary perturbation from dropping all blocks after the first keep_l values:
// 0.5 (1 + sum_kept nnz sigma) (sum_dropped nnz sigma).
double truncation_unitary_bound(const Factorization& f, int keep_l, double nnz_tol = 1e-12);

struct ElementBounds {
    double dH = 0.0;      // |delta H_IJ| <= 2 ||H|| ||dU||
    double dS = 0.0;      // |delta S_IJ| <= 2 ||dU||
    double dH_mat = 0.0;  // ||delta H|| <= 2 M ||H|| ||dU||
    double dS_mat = 0.0;  // ||delta S|| <= 2 M ||dU||
};
ElementBounds matrix_element_bounds(int n_refs, double du, double h_norm);

// Eigenvalue sensitivity through the arctan metric:
// dtheta <= asin(2 M^2 ||dU|| sqrt(1 + ||H||_u^2)).
double eigenvalue_angle_bound(int n_refs, double du, double h_norm_u);

// Smallest Suzuki order p whose product-formula bound meets the angle target;
// returns -1 if none up to p_max does.
int min_trotter_order(const Factorization& f, int n_refs, double h_norm_u,
                      double dtheta_target, int p_max = 64);

}  // namespace noqe
