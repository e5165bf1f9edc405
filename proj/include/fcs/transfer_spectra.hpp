#pragma once

// The transfer operator T(x rho^{1/2}) = tau(x) rho^{1/2} on the GNS space of
// the invariant state, its spectral gap and the resulting bound on connected
// two-point functions.

#include <limits>

#include "fcs/fcs_core.hpp"

namespace fcs {

struct TransferOperator {
  int k = 0;
  Mat matrix;  // k^2 x k^2 in the orthonormal basis vec(E_ab)
  Vec cyclic;  // vec(rho^{1/2})
  Mat rho_sqrt;
  Mat rho_inv_sqrt;

  Mat cyclic_projector() const { return cyclic * cyclic.adjoint(); }
};

inline TransferOperator build_transfer(const FcsState& state) {
  const int k = state.k();
  if (hermitian_eig(state.rho).values(0) <= kFaithfulTol)
    throw NotFaithful("transfer operator needs a faithful invariant state");
  TransferOperator t;
  t.k = k;
  t.rho_sqrt = psd_power(state.rho, 0.5);
  t.rho_inv_sqrt = psd_power(state.rho, -0.5);
  const Mat id = Mat::Identity(k, k);
  // X -> tau(X rho^{-1/2}) rho^{1/2}
  t.matrix = kron(t.rho_sqrt.transpose(), id) * tau_matrix(state.kraus) *
             kron(t.rho_inv_sqrt.transpose(), id);
  t.cyclic = vec(t.rho_sqrt);
  return t;
}

/// Operator norm of T - T^*, the adjoint taken in the GNS inner product.
inline double check_selfadjoint(const TransferOperator& t) {
  return operator_norm(t.matrix - t.matrix.adjoint());
}

struct GapReport {
  Vec eigenvalues;  // modulus descending, ties by real then imaginary part
  double delta = 1.0;
  double selfadjoint_defect = 0.0;
  int fixed_multiplicity = 1;
  bool ergodic = true;
  /// sqrt of the top eigenvalue of T^2 - |cyclic><cyclic| (self-adjoint case).
  double delta_from_square = 1.0;
};

inline constexpr double kSelfAdjointTol = 1e-9;

inline GapReport gap(const TransferOperator& t) {
  GapReport g;
  const SortedEig e = sorted_eig(t.matrix);
  g.eigenvalues = e.values;
  g.selfadjoint_defect = check_selfadjoint(t);
  g.fixed_multiplicity = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (std::abs(e.values(i) - 1.0) < kEigenvalueOneTol) ++g.fixed_multiplicity;
  g.fixed_multiplicity = std::max(g.fixed_multiplicity, 1);
  g.ergodic = g.fixed_multiplicity == 1;

  const Mat centered = t.matrix - t.cyclic_projector();
  if (!g.ergodic) {
    g.delta = 1.0;
  } else if (centered.rows() == 1) {
    g.delta = std::abs(centered(0, 0));
  } else {
    const SortedEig c = sorted_eig(centered);
    g.delta = std::min(1.0, std::abs(c.values(0)));
  }
  // Peripheral eigenvalues other than the fixed one leave no gap.
  if (1.0 - g.delta < kEigenvalueOneTol) g.delta = 1.0;
  const Mat sq = hermitian_part(t.matrix * t.matrix - t.cyclic_projector());
  const double top = hermitian_eig(sq).values.maxCoeff();
  g.delta_from_square = std::sqrt(std::max(top, 0.0));
  return g;
}

/// GNS vectors of a pair of one-site insertions: for A at site 0 and B at
/// site n, omega(A theta^n(B)) = <alpha, T^{n-1} beta>.
struct Insertions {
  Vec alpha;
  Vec beta;
};

inline Insertions insertions(const FcsState& state, const TransferOperator& t, const Mat& a,
                             const Mat& b) {
  const int d = state.d();
  if (a.rows() != d || a.cols() != d || b.rows() != d || b.cols() != d)
    throw InvalidArgument("one-site observables must be d x d");
  const int k = state.k();
  const auto& v = state.kraus.v;
  // omega(A (x) X) = tr(rho E_A(X)) = tr(M X) with M = sum A_ij v_j^* rho v_i.
  Mat m = Mat::Zero(k, k);
  Mat eb = Mat::Zero(k, k);  // E_B(I) = sum B_ij v_i v_j^*
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (a(i, j) != cplx(0.0)) m += a(i, j) * v[j].adjoint() * state.rho * v[i];
      if (b(i, j) != cplx(0.0)) eb += b(i, j) * v[i] * v[j].adjoint();
    }
  return {vec(m.adjoint() * t.rho_inv_sqrt), vec(eb * t.rho_sqrt)};
}

/// omega(A theta^n(B)) - omega(A) omega(B) through powers of T.
inline cplx two_point(const FcsState& state, const Mat& a, const Mat& b, int n) {
  if (n < 1) throw InvalidArgument("two_point needs n >= 1 (disjoint supports)");
  const TransferOperator t = build_transfer(state);
  const Insertions ins = insertions(state, t, a, b);
  const Mat centered = t.matrix - t.cyclic_projector();
  const Mat q = Mat::Identity(t.matrix.rows(), t.matrix.cols()) - t.cyclic_projector();
  Vec x = q * ins.beta;
  for (int step = 1; step < n; ++step) x = centered * x;
  return ins.alpha.dot(x);
}

struct DecayRow {
  int n = 0;
  cplx corr;
  double abs_corr = 0.0;
  double ratio = 0.0;  // Re corr(n) / Re corr(n-1); NaN when undefined
  double bound = 0.0;
  double margin = 0.0;  // bound - |corr|
};

struct DecayCertificate {
  double delta = 1.0;
  double beta_sup = 0.0;  // every beta < beta_sup has e^beta delta < 1
  bool selfadjoint = false;
  double constant = 1.0;  // C in |corr(n)| <= C delta^{n-1} |a||b|
  double norm_a = 0.0;    // GNS norms of the centered insertions
  double norm_b = 0.0;
  bool ergodic = true;
  bool pass = false;
  std::vector<DecayRow> rows;
  std::vector<int> violations;
};

/// Checks |corr(n)| <= C delta^{n-1} |a| |b| for n = 1..n_max, where the
/// exponent counts the transfer steps between the two insertions. C = 1 when
/// T is self-adjoint; otherwise C = max_m |(T-P)^m| / delta^m over the range.
inline DecayCertificate decay_certificate(const FcsState& state, const Mat& a, const Mat& b,
                                          int n_max) {
  if (n_max < 1) throw InvalidArgument("n_max must be at least 1");
  const TransferOperator t = build_transfer(state);
  const GapReport g = gap(t);
  DecayCertificate cert;
  cert.delta = g.delta;
  cert.ergodic = g.ergodic;
  cert.selfadjoint = g.selfadjoint_defect <= kSelfAdjointTol;
  cert.beta_sup = g.delta > 0.0 ? -std::log(g.delta) : std::numeric_limits<double>::infinity();

  const Insertions ins = insertions(state, t, a, b);
  const Mat proj = t.cyclic_projector();
  const Mat q = Mat::Identity(proj.rows(), proj.cols()) - proj;
  const Mat centered = t.matrix - proj;
  const Vec alpha_c = q * ins.alpha;
  const Vec beta_c = q * ins.beta;
  cert.norm_a = alpha_c.norm();
  cert.norm_b = beta_c.norm();

  std::vector<double> power_norms(n_max, 1.0);  // |(T-P)^m| for m = 0..n_max-1
  if (!cert.selfadjoint) {
    Mat p = Mat::Identity(proj.rows(), proj.cols());
    power_norms[0] = operator_norm(q);
    cert.constant = std::max(power_norms[0], 1.0);
    for (int m = 1; m < n_max; ++m) {
      p = centered * p;
      power_norms[m] = operator_norm(p);
      if (g.delta > 0.0)
        cert.constant = std::max(cert.constant, power_norms[m] / std::pow(g.delta, m));
    }
  }

  Vec x = beta_c;
  double prev_re = 0.0;
  const double scale = cert.norm_a * cert.norm_b;
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) x = centered * x;
    DecayRow row;
    row.n = n;
    row.corr = alpha_c.dot(x);
    row.abs_corr = std::abs(row.corr);
    row.ratio = (n > 1 && std::abs(prev_re) > 1e-300) ? row.corr.real() / prev_re
                                                       : std::numeric_limits<double>::quiet_NaN();
    prev_re = row.corr.real();
    if (cert.selfadjoint || g.delta > 0.0)
      row.bound = cert.constant * std::pow(g.delta, n - 1) * scale;
    else
      row.bound = power_norms[n - 1] * scale;
    row.margin = row.bound - row.abs_corr;
    // Relative slack for rounding in the power iteration.
    if (row.margin < -(1e-12 + 1e-9 * row.bound)) cert.violations.push_back(n);
    cert.rows.push_back(row);
  }
  cert.pass = cert.ergodic && g.delta < 1.0 && cert.violations.empty();
  if (!cert.ergodic || g.delta >= 1.0) {
    // Definition-level failure: correlations need not vanish. List every n
    // with a non-negligible connected correlation.
    for (const auto& row : cert.rows)
      if (row.abs_corr > 1e-12 &&
          std::find(cert.violations.begin(), cert.violations.end(), row.n) ==
              cert.violations.end())
        cert.violations.push_back(row.n);
    std::sort(cert.violations.begin(), cert.violations.end());
  }
  return cert;
}

}  // namespace fcs
