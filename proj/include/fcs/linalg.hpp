#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fcs/error.hpp"

namespace fcs {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

/// Largest entry modulus; the "max norm" used for all entrywise identities.
inline double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Mat kron_power(const Mat& a, int n) {
  Mat out = Mat::Identity(1, 1);
  for (int i = 0; i < n; ++i) out = kron(out, a);
  return out;
}

inline Mat hermitian_part(const Mat& m) { return 0.5 * (m + m.adjoint()); }

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
struct HermitianEig {
  RVec values;
  Mat vectors;
};

inline HermitianEig hermitian_eig(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h));
  if (es.info() != Eigen::Success) throw Error("hermitian eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

inline RVec hermitian_eigenvalues(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("hermitian eigensolver failed");
  return es.eigenvalues();
}

/// f(H) for Hermitian H through its spectral decomposition.
template <typename F>
Mat hermitian_function(const Mat& h, F&& f) {
  auto eig = hermitian_eig(h);
  Vec fv(eig.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(eig.values(i));
  return eig.vectors * fv.asDiagonal() * eig.vectors.adjoint();
}

/// exp(i H) for Hermitian H.
inline Mat expi_hermitian(const Mat& h) {
  return hermitian_function(h, [](double x) { return std::exp(kI * x); });
}

inline Mat psd_power(const Mat& p, double power) {
  return hermitian_function(p, [power](double x) {
    return cplx(std::pow(std::max(x, 0.0), power), 0.0);
  });
}

/// Closest unitary in Frobenius norm (polar factor).
inline Mat polar_unitary(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

inline double operator_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

/// Null space of m (columns orthonormal), singular values below tol.
inline Mat null_space(const Mat& m, double tol) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++rank;
  const Eigen::Index n = m.cols();
  return svd.matrixV().rightCols(n - rank);
}

/// Column-major vectorization, matching Eigen's storage.
inline Vec vec(const Mat& m) {
  return Eigen::Map<const Vec>(m.data(), m.size());
}

inline Mat unvec(const Vec& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

// Random helpers. All take the engine by reference so one seed drives a run.
using Rng = std::mt19937_64;

inline Mat random_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

inline Mat random_hermitian(Rng& rng, Eigen::Index n) {
  return hermitian_part(random_gaussian(rng, n, n));
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
inline Mat random_unitary(Rng& rng, Eigen::Index n) {
  Mat g = random_gaussian(rng, n, n);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = std::abs(r(i, i));
    if (a > 0) q.col(i) *= r(i, i) / a;
  }
  return q;
}

/// Integer power with overflow refusal against a cap.
inline std::int64_t checked_pow(std::int64_t base, int exp, std::int64_t cap,
                                const std::string& what) {
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > cap / std::max<std::int64_t>(base, 1))
      throw ResourceLimit(what + " exceeds the configured cap of " +
                          std::to_string(cap));
    out *= base;
  }
  if (out > cap)
    throw ResourceLimit(what + " exceeds the configured cap of " +
                        std::to_string(cap));
  return out;
}

/// Dimension cap, overridable through FCS_MAX_DIM.
inline std::int64_t max_dim(std::int64_t fallback = 6561) {
  if (const char* env = std::getenv("FCS_MAX_DIM")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return fallback;
}

}  // namespace fcs
