#include "noqe/integrals.hpp"

#include "noqe/geometry.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

namespace noqe {

double boys_f0(double t) {
    // The series and the closed form agree to ~1e-13 at the crossover.
    if (t < 1e-6) return 1.0 - t / 3.0 + t * t / 10.0;
    const double st = std::sqrt(t);
    return 0.5 * std::sqrt(std::numbers::pi / t) * std::erf(st);
}

IntegralSet compute_integrals(const Molecule& mol, const AOBasis& basis) {
    constexpr double pi = std::numbers::pi;
    const int n = basis.nbf();
    IntegralSet ints;
    ints.nbf = n;
    ints.S = Mat::Zero(n, n);
    ints.T = Mat::Zero(n, n);
    ints.V = Mat::Zero(n, n);
    for (auto& d : ints.dipole) d = Mat::Zero(n, n);
    ints.eri = Tensor4(n);
    ints.e_nuc = nuclear_repulsion(mol);

    for (int mu = 0; mu < n; ++mu) {
        const auto& m = basis.shells[mu];
        for (int nu = 0; nu < n; ++nu) {
            const auto& v = basis.shells[nu];
            const Eigen::Vector3d ab = m.center - v.center;
            const double ab2 = ab.squaredNorm();
            double s = 0.0, t = 0.0, vn = 0.0;
            Eigen::Vector3d dip = Eigen::Vector3d::Zero();
            for (std::size_t i = 0; i < m.exps.size(); ++i) {
                for (std::size_t j = 0; j < v.exps.size(); ++j) {
                    const double a = m.exps[i], b = v.exps[j];
                    const double p = a + b;
                    const double mu_ab = a * b / p;
                    const double pref =
                        m.coefs[i] * v.coefs[j] * std::pow(pi / p, 1.5) * std::exp(-mu_ab * ab2);
                    const Eigen::Vector3d pc = (a * m.center + b * v.center) / p;
                    s += pref;
                    t += pref * mu_ab * (3.0 - 2.0 * mu_ab * ab2);
                    dip += pref * pc;
                    const double vpref = m.coefs[i] * v.coefs[j] * (2.0 * pi / p) *
                                         std::exp(-mu_ab * ab2);
                    for (const Atom& atom : mol.atoms)
                        vn -= atom.Z * vpref * boys_f0(p * (pc - atom.r).squaredNorm());
                }
            }
            ints.S(mu, nu) = s;
            ints.T(mu, nu) = t;
            ints.V(mu, nu) = vn;
            for (int c = 0; c < 3; ++c) ints.dipole[c](mu, nu) = dip[c];
        }
    }

    for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu)
            for (int la = 0; la < n; ++la)
                for (int si = 0; si < n; ++si) {
                    const auto& sm = basis.shells[mu];
                    const auto& sn = basis.shells[nu];
                    const auto& sl = basis.shells[la];
                    const auto& ss = basis.shells[si];
                    const double ab2 = (sm.center - sn.center).squaredNorm();
                    const double cd2 = (sl.center - ss.center).squaredNorm();
                    double val = 0.0;
                    for (std::size_t i = 0; i < sm.exps.size(); ++i)
                        for (std::size_t j = 0; j < sn.exps.size(); ++j) {
                            const double a = sm.exps[i], b = sn.exps[j];
                            const double p = a + b;
                            const Eigen::Vector3d pp = (a * sm.center + b * sn.center) / p;
                            const double ep = std::exp(-a * b / p * ab2);
                            for (std::size_t k = 0; k < sl.exps.size(); ++k)
                                for (std::size_t l = 0; l < ss.exps.size(); ++l) {
                                    const double c = sl.exps[k], d = ss.exps[l];
                                    const double q = c + d;
                                    const Eigen::Vector3d qq =
                                        (c * sl.center + d * ss.center) / q;
                                    const double eq = std::exp(-c * d / q * cd2);
                                    val += sm.coefs[i] * sn.coefs[j] * sl.coefs[k] * ss.coefs[l] *
                                           2.0 * std::pow(pi, 2.5) /
                                           (p * q * std::sqrt(p + q)) * ep * eq *
                                           boys_f0(p * q / (p + q) * (pp - qq).squaredNorm());
                                }
                        }
                    ints.eri(mu, nu, la, si) = val;
                }
    return ints;
}

namespace {

void dump_mat(std::ostream& out, const char* tag, const Mat& m) {
    out << tag << "\n";
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            out << buf << (j + 1 == m.cols() ? "" : " ");
        }
        out << "\n";
    }
}

Mat read_mat(std::istream& in, int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!(in >> m(i, j))) throw Error("truncated integral dump");
    return m;
}

}  // namespace

void dump_integrals(const IntegralSet& ints, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write integral dump: " + path);
    out << "noqe-integrals 1\n";
    out << "nbf " << ints.nbf << "\n";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", ints.e_nuc);
    out << "e_nuc " << buf << "\n";
    dump_mat(out, "S", ints.S);
    dump_mat(out, "T", ints.T);
    dump_mat(out, "V", ints.V);
    dump_mat(out, "DX", ints.dipole[0]);
    dump_mat(out, "DY", ints.dipole[1]);
    dump_mat(out, "DZ", ints.dipole[2]);
    out << "ERI\n";
    const int n = ints.nbf;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r) {
                for (int s = 0; s < n; ++s) {
                    std::snprintf(buf, sizeof(buf), "%.17g", ints.eri(p, q, r, s));
                    out << buf << (s + 1 == n ? "" : " ");
                }
                out << "\n";
            }
}

IntegralSet load_integrals(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open integral dump: " + path);
    std::string tag;
    int version = 0;
    in >> tag >> version;
    if (tag != "noqe-integrals" || version != 1)
        throw Error("not an integral dump: " + path);
    IntegralSet ints;
    in >> tag >> ints.nbf;
    in >> tag >> ints.e_nuc;
    const int n = ints.nbf;
    in >> tag, ints.S = read_mat(in, n);
    in >> tag, ints.T = read_mat(in, n);
    in >> tag, ints.V = read_mat(in, n);
    for (auto& d : ints.dipole) in >> tag, d = read_mat(in, n);
    in >> tag;
    ints.eri = Tensor4(n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s)
                    if (!(in >> ints.eri(p, q, r, s))) throw Error("truncated integral dump");
    return ints;
}

Mat mo_h_spin(const Mat& h, const Mat& Ca, const Mat& Cb) {
    const int n = static_cast<int>(Ca.cols());
    Mat hs = Mat::Zero(2 * n, 2 * n);
    hs.topLeftCorner(n, n) = Ca.transpose() * h * Ca;
    hs.bottomRightCorner(n, n) = Cb.transpose() * h * Cb;
    return hs;
}

namespace {

// Chemists (pq|rs) with bra pair in basis C1 and ket pair in basis C2,
// by staged one-index contractions.
Tensor4 transform_chem(const Tensor4& eri, const Mat& c1, const Mat& c2) {
    const int n = eri.dim();
    Tensor4 t1(n), t2(n), t3(n), out(n);
    for (int p = 0; p < n; ++p)
        for (int nu = 0; nu < n; ++nu)
            for (int la = 0; la < n; ++la)
                for (int si = 0; si < n; ++si) {
                    double acc = 0.0;
                    for (int mu = 0; mu < n; ++mu) acc += c1(mu, p) * eri(mu, nu, la, si);
                    t1(p, nu, la, si) = acc;
                }
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int la = 0; la < n; ++la)
                for (int si = 0; si < n; ++si) {
                    double acc = 0.0;
                    for (int nu = 0; nu < n; ++nu) acc += c1(nu, q) * t1(p, nu, la, si);
                    t2(p, q, la, si) = acc;
                }
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int si = 0; si < n; ++si) {
                    double acc = 0.0;
                    for (int la = 0; la < n; ++la) acc += c2(la, r) * t2(p, q, la, si);
                    t3(p, q, r, si) = acc;
                }
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s) {
                    double acc = 0.0;
                    for (int si = 0; si < n; ++si) acc += c2(si, s) * t3(p, q, r, si);
                    out(p, q, r, s) = acc;
                }
    return out;
}

}  // namespace

Tensor4 mo_eri_spin(const Tensor4& eri, const Mat& Ca, const Mat& Cb) {
    const int n = static_cast<int>(Ca.cols());
    const Tensor4 aa = transform_chem(eri, Ca, Ca);
    const Tensor4 ab = transform_chem(eri, Ca, Cb);
    const Tensor4 ba = transform_chem(eri, Cb, Ca);
    const Tensor4 bb = transform_chem(eri, Cb, Cb);
    Tensor4 g(2 * n);
    auto spin = [n](int p) { return p < n ? 0 : 1; };
    auto spat = [n](int p) { return p < n ? p : p - n; };
    for (int p = 0; p < 2 * n; ++p)
        for (int q = 0; q < 2 * n; ++q)
            for (int r = 0; r < 2 * n; ++r)
                for (int s = 0; s < 2 * n; ++s) {
                    if (spin(p) != spin(r) || spin(q) != spin(s)) continue;
                    const Tensor4* src = nullptr;
                    if (spin(p) == 0)
                        src = spin(q) == 0 ? &aa : &ab;
                    else
                        src = spin(q) == 0 ? &ba : &bb;
                    // physicists <pq|rs> = chemists (pr|qs)
                    g(p, q, r, s) = (*src)(spat(p), spat(r), spat(q), spat(s));
                }
    return g;
}

double hamiltonian_one_norm(const Mat& h_spin, const Tensor4& g_spin) {
    double norm = h_spin.cwiseAbs().sum();
    const int n = g_spin.dim();
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s) norm += std::abs(g_spin(p, q, r, s));
    return norm;
}

}  // namespace noqe
