#pragma once

// Site permutations and the twisted reflection Gram matrix shared by the FCS
// checks and the finite-chain oracle.

#include "fcs/linalg.hpp"

namespace fcs {

/// Index map of the permutation reversing the order of m sites of dimension d.
inline std::vector<Eigen::Index> reversal_map(int d, int m) {
  const Eigen::Index dim = static_cast<Eigen::Index>(std::pow(d, m) + 0.5);
  std::vector<Eigen::Index> out(dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    Eigen::Index rest = idx, rev = 0;
    for (int s = 0; s < m; ++s) {
      rev = rev * d + rest % d;
      rest /= d;
    }
    out[idx] = rev;
  }
  return out;
}

/// P X P for the site-reversal permutation P.
inline Mat reverse_sites(const Mat& x, int d, int m) {
  const auto map = reversal_map(d, m);
  Mat out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) out(map[i], map[j]) = x(i, j);
  return out;
}

/// Applies a one-site matrix w to every site: W X W^* with W = w^{(x)m}.
inline Mat conjugate_sites(const Mat& x, const Mat& w, int m) {
  const Mat big = kron_power(w, m);
  return big * x * big.adjoint();
}

/// Gram matrix G_{ab} = omega(J(Q_a) Q_b) over matrix units Q = |I><J| of the
/// right half [1, m], where J(Q) = conj(r0 (reflected Q) r0) lives on the left
/// half [1-m, 0]. rho2m is the density matrix of the 2m sites [1-m, m] (site
/// 1-m most significant). Rows and columns are labelled by (I, J) -> I d^m + J.
inline Mat reflection_gram(const Mat& rho2m, int d, int m, const Mat& r0) {
  if (m == 0) return Mat::Constant(1, 1, rho2m.trace());
  const Eigen::Index half = static_cast<Eigen::Index>(std::pow(d, m) + 0.5);
  if (rho2m.rows() != half * half) throw InvalidArgument("rho has the wrong dimension");
  // A = Rc P on the left half, Rc = conj(r0)^{(x)m}, P the reversal.
  const Mat rc = kron_power(r0.conjugate(), m);
  const auto rev = reversal_map(d, m);
  Mat a = Mat::Zero(half, half);
  for (Eigen::Index col = 0; col < half; ++col) a.col(col) = rc.col(rev[col]);
  const Mat id = Mat::Identity(half, half);
  const Mat ainv = a.inverse();
  // omega(A E A^{-1} (x) E') = tr(rho_hat (E (x) E')), rho_hat = (A^{-1} (x) I) rho (A (x) I)
  const Mat rho_hat = kron(ainv, id) * rho2m * kron(a, id);
  const Eigen::Index n = half * half;
  Mat g(n, n);
  for (Eigen::Index i = 0; i < half; ++i)
    for (Eigen::Index j = 0; j < half; ++j)
      for (Eigen::Index ip = 0; ip < half; ++ip)
        for (Eigen::Index jp = 0; jp < half; ++jp)
          g(i * half + j, ip * half + jp) = rho_hat(j * half + jp, i * half + ip);
  return g;
}

}  // namespace fcs
