#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace noqe {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

// CODATA-2018 Bohr radius in Angstrom.
inline constexpr double kAngstromPerBohr = 0.529177210903;
inline constexpr double kBohrPerAngstrom = 1.0 / kAngstromPerBohr;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense rank-4 tensor of doubles with a single dimension n for all four axes.
class Tensor4 {
  public:
    Tensor4() = default;
    explicit Tensor4(int n) : n_(n), a_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

    int dim() const { return n_; }
    std::size_t size() const { return a_.size(); }

    double& operator()(int p, int q, int r, int s) { return a_[idx(p, q, r, s)]; }
    double operator()(int p, int q, int r, int s) const { return a_[idx(p, q, r, s)]; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

  private:
    std::size_t idx(int p, int q, int r, int s) const {
        return ((static_cast<std::size_t>(p) * n_ + q) * n_ + r) * n_ + s;
    }
    int n_ = 0;
    std::vector<double> a_;
};

// Interleaved spin-orbital label used by the canonical supermatrix conditions:
// blocked index p (alpha spatials first, then beta) -> 2*spatial + spin.
inline int interleaved_index(int p, int n_spatial) {
    return p < n_spatial ? 2 * p : 2 * (p - n_spatial) + 1;
}

}  // namespace noqe
