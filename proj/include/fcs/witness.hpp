#pragma once

// Known states and random state generators used by tests, the CLI demo and the
// bundled data files.

#include "fcs/fcs_core.hpp"
#include "fcs/su2_repr.hpp"

namespace fcs::witness {

/// Spin-1 AKLT tensors in the real gauge: sqrt(2/3) s+, -sqrt(1/3) sz,
/// -sqrt(2/3) s- for m = +1, 0, -1, with s+- and sz the Pauli ladder/diagonal.
inline KrausFamily aklt() {
  Mat sp = Mat::Zero(2, 2), sm = Mat::Zero(2, 2), sz = Mat::Zero(2, 2);
  sp(0, 1) = 1.0;
  sm(1, 0) = 1.0;
  sz(0, 0) = 1.0;
  sz(1, 1) = -1.0;
  return KrausFamily({std::sqrt(2.0 / 3.0) * sp, -std::sqrt(1.0 / 3.0) * sz,
                      -std::sqrt(2.0 / 3.0) * sm});
}

/// Product state of the unit vector xi: k = 1 and v_i = conj(xi_i), so that
/// omega(|i><j|) = conj(xi_i) xi_j = <xi, |i><j| xi>.
inline KrausFamily product_state(const Vec& xi) {
  const Vec u = xi / xi.norm();
  std::vector<Mat> v;
  for (Eigen::Index i = 0; i < u.size(); ++i) v.push_back(Mat::Constant(1, 1, std::conj(u(i))));
  return KrausFamily(v);
}

inline KrausFamily direct_sum(const KrausFamily& a, const KrausFamily& b) {
  if (a.d != b.d) throw InvalidArgument("direct sum needs equal physical dimension");
  std::vector<Mat> v;
  for (int i = 0; i < a.d; ++i) {
    Mat m = Mat::Zero(a.k + b.k, a.k + b.k);
    m.topLeftCorner(a.k, a.k) = a.v[i];
    m.bottomRightCorner(b.k, b.k) = b.v[i];
    v.push_back(m);
  }
  return KrausFamily(v);
}

/// Haar-random isometry cut into d blocks: sum_i v_i v_i^* = I.
inline KrausFamily random_unital(Rng& rng, int d, int k) {
  Mat g = random_gaussian(rng, static_cast<Eigen::Index>(d) * k, k);
  Eigen::HouseholderQR<Mat> qr(g);
  const Mat q = qr.householderQ() * Mat::Identity(static_cast<Eigen::Index>(d) * k, k);
  std::vector<Mat> v;
  for (int i = 0; i < d; ++i) v.push_back(q.block(i * k, 0, k, k).adjoint());
  return KrausFamily(v);
}

/// Generators of a direct sum of spin irreps, one block per entry of dims.
inline std::array<Mat, 3> bond_generators(const std::vector<int>& dims) {
  int k = 0;
  for (int n : dims) k += n;
  std::array<Mat, 3> x{Mat::Zero(k, k), Mat::Zero(k, k), Mat::Zero(k, k)};
  int off = 0;
  for (int n : dims) {
    const SpinRep r = build_spin_rep(n);
    for (int a = 0; a < 3; ++a) x[a].block(off, off, n, n) = r.generator(a);
    off += n;
  }
  return x;
}

/// Linear space of families with [X_a, v_i] = sum_j (S_a)_{ji} v_j, as columns
/// of stacked vec(v_1), ..., vec(v_d).
inline Mat covariant_space(const SpinRep& rep, const std::array<Mat, 3>& x) {
  const Eigen::Index k = x[0].rows();
  const int d = rep.d;
  const Eigen::Index n = k * k;
  const Mat id = Mat::Identity(k, k);
  Mat sys = Mat::Zero(3 * d * n, d * n);
  for (int a = 0; a < 3; ++a) {
    const Mat comm = kron(id, x[a]) - kron(x[a].transpose(), id);  // vec([X, v])
    const Mat& s = rep.generator(a);
    for (int i = 0; i < d; ++i) {
      const Eigen::Index row = (a * d + i) * n;
      sys.block(row, i * n, n, n) += comm;
      for (int j = 0; j < d; ++j) sys.block(row, j * n, n, n) -= s(j, i) * Mat::Identity(n, n);
    }
  }
  return null_space(sys, 1e-9);
}

/// Random SU(2)-covariant unital family for physical irrep rep and bond space
/// given as a direct sum of irreps. Returns nullopt if no covariant family with
/// invertible sum_i v_i v_i^* exists for that bond space.
inline std::optional<KrausFamily> random_su2_covariant(Rng& rng, const SpinRep& rep,
                                                       const std::vector<int>& bond_dims) {
  const auto x = bond_generators(bond_dims);
  const Mat space = covariant_space(rep, x);
  if (space.cols() == 0) return std::nullopt;
  const Eigen::Index k = x[0].rows();
  const Vec coeff = random_gaussian(rng, space.cols(), 1);
  const Vec flat = space * coeff;
  std::vector<Mat> v;
  Mat m = Mat::Zero(k, k);
  for (int i = 0; i < rep.d; ++i) {
    v.push_back(unvec(flat.segment(i * k * k, k * k), k, k));
    m += v.back() * v.back().adjoint();
  }
  const auto eig = hermitian_eig(m);
  if (eig.values(0) < 1e-6 * eig.values(eig.values.size() - 1)) return std::nullopt;
  const Mat scale = psd_power(m, -0.5);  // commutes with the bond generators
  for (auto& vi : v) vi = scale * vi;
  return KrausFamily(v);
}

/// Random family with v_i^* = sum_j (r_zeta)_{ji} v_j exactly and
/// sum v v^* = sum v^* v = I (so the trace is invariant). Requires r_zeta real
/// symmetric orthogonal, i.e. odd d.
inline KrausFamily random_twist_symmetric(Rng& rng, const TwistMatrix& twist, int k) {
  const Mat rz = twist.r_zeta();
  if (max_abs(rz.imag()) > 1e-12 || max_abs(rz - rz.transpose()) > 1e-12)
    throw InvalidArgument("twist-symmetric families need a real symmetric r_zeta (odd d)");
  Eigen::SelfAdjointEigenSolver<RMat> es(rz.real());
  const RMat o = es.eigenvectors();
  const int d = twist.d;
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  std::vector<double> w(d);
  double total = 0.0;
  for (auto& p : w) total += (p = unif(rng));
  std::vector<Mat> prime;
  for (int a = 0; a < d; ++a) {
    // sqrt(p) times a Hermitian unitary; anti-Hermitian on the -1 eigenspace.
    const Mat u = random_unitary(rng, k);
    Vec signs(k);
    for (int i = 0; i < k; ++i) signs(i) = (rng() & 1u) ? 1.0 : -1.0;
    Mat h = std::sqrt(w[a] / total) * (u * signs.asDiagonal() * u.adjoint());
    if (es.eigenvalues()(a) < 0) h *= kI;
    prime.push_back(h);
  }
  std::vector<Mat> v(d, Mat::Zero(k, k));
  for (int i = 0; i < d; ++i)
    for (int a = 0; a < d; ++a) v[i] += o(i, a) * prime[a];
  return KrausFamily(v);
}

}  // namespace fcs::witness
