#pragma once

// SU(2) irreducible representations in the |s,m> basis, the conjugation twist
// r0 and its parity mu.

#include <array>
#include <numbers>

#include "fcs/linalg.hpp"

namespace fcs {

/// Spin-s irrep of dimension d = 2s+1. Basis index a = 0..d-1 carries
/// magnetic number m = s - a, so Sz = diag(s, s-1, ..., -s).
struct SpinRep {
  int d = 1;
  double s = 0.0;
  Mat sx, sy, sz;

  double m_label(int a) const { return s - a; }
  const Mat& generator(int axis) const {
    return axis == 0 ? sx : (axis == 1 ? sy : sz);
  }
  Mat casimir() const { return sx * sx + sy * sy + sz * sz; }
};

struct GroupElement {
  std::array<double, 3> theta{0.0, 0.0, 0.0};
  Mat u;
};

/// Unitary r0 with r0^2 = I and r0 u(g) r0 = conj(u(g)); conj(r0) = mu r0 and
/// zeta r0 is real with zeta^2 = mu.
struct TwistMatrix {
  int d = 1;
  Mat r0;
  cplx zeta{1.0, 0.0};
  int mu = 1;

  /// r_zeta = zeta * r0, real for every d.
  Mat r_zeta() const { return zeta * r0; }
};

inline SpinRep build_spin_rep(int d) {
  if (d < 1) throw InvalidArgument("invalid irrep dimension " + std::to_string(d));
  SpinRep rep;
  rep.d = d;
  rep.s = 0.5 * (d - 1);
  Mat sp = Mat::Zero(d, d);
  for (int a = 1; a < d; ++a) {
    const double m = rep.m_label(a);
    sp(a - 1, a) = std::sqrt(rep.s * (rep.s + 1.0) - m * (m + 1.0));
  }
  const Mat sm = sp.adjoint();
  rep.sx = 0.5 * (sp + sm);
  rep.sy = (sp - sm) / (2.0 * kI);
  rep.sz = Mat::Zero(d, d);
  for (int a = 0; a < d; ++a) rep.sz(a, a) = rep.m_label(a);
  return rep;
}

/// u = exp(i (tx Sx + ty Sy + tz Sz)).
inline GroupElement group_element(const SpinRep& rep,
                                  const std::array<double, 3>& theta) {
  const Mat gen = theta[0] * rep.sx + theta[1] * rep.sy + theta[2] * rep.sz;
  return {theta, expi_hermitian(gen)};
}

/// Uniform axis on the sphere, angle uniform in [0, 2pi).
inline GroupElement sample_group_element(const SpinRep& rep, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  std::array<double, 3> axis{g(rng), g(rng), g(rng)};
  double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (n == 0.0) {
    axis = {0.0, 0.0, 1.0};
    n = 1.0;
  }
  const double a = ang(rng);
  return group_element(rep, {a * axis[0] / n, a * axis[1] / n, a * axis[2] / n});
}

inline constexpr double kTwistTol = 1e-10;

/// r0 is exp(i pi Sy) for integer spin and i exp(i pi Sy) for half-integer
/// spin; the sign makes the (m=s, m=-s) entry +1 (resp. +i).
inline TwistMatrix build_twist(const SpinRep& rep) {
  const int d = rep.d;
  const Mat rot = expi_hermitian(std::numbers::pi * rep.sy);
  const bool half_integer = (d % 2 == 0);
  TwistMatrix t;
  t.d = d;
  t.r0 = half_integer ? Mat(kI * rot) : rot;
  const cplx corner = t.r0(0, d - 1);
  const cplx want = half_integer ? kI : cplx(1.0, 0.0);
  if (std::abs(corner - want) > std::abs(corner + want)) t.r0 = -t.r0;
  // exp(i pi Sy) is a signed anti-diagonal permutation in this basis; snap the
  // rounding so r0 has exact entries in {0, +-1} (times i for even d).
  RMat part = half_integer ? RMat(t.r0.imag()) : RMat(t.r0.real());
  if ((part - part.array().round().matrix()).cwiseAbs().maxCoeff() < 1e-8)
    part = part.array().round().matrix();
  t.r0 = half_integer ? Mat(kI * part.cast<cplx>()) : Mat(part.cast<cplx>());
  t.mu = half_integer ? -1 : 1;
  t.zeta = half_integer ? cplx(0.0, -1.0) : cplx(1.0, 0.0);
  const double sq = max_abs(t.r0 * t.r0 - Mat::Identity(d, d));
  if (sq > kTwistTol)
    throw Error("twist construction failed: |r0^2 - I| = " + std::to_string(sq));
  return t;
}

/// Recovers mu from conj(r0) = mu r0.
inline int compute_mu(const TwistMatrix& t, double tol = kTwistTol) {
  const Eigen::Index d = t.r0.rows();
  if (max_abs(t.r0 * t.r0 - Mat::Identity(d, d)) > tol)
    throw InvalidArgument("twist does not square to the identity");
  const Mat c = t.r0.conjugate();
  const cplx ratio = t.r0.cwiseProduct(c.conjugate()).sum() / t.r0.squaredNorm();
  if (std::abs(ratio.imag()) > tol || std::abs(std::abs(ratio.real()) - 1.0) > tol ||
      max_abs(c - ratio * t.r0) > tol)
    throw InvalidArgument("conj(r0) is not a real multiple of r0");
  const int mu = ratio.real() > 0 ? 1 : -1;
  // det(conj r0) det(r0) = mu^d = |det r0|^2 = 1 pins mu = 1 for odd d.
  if (d % 2 == 1 && mu != 1)
    throw InvalidArgument("mu = -1 is impossible in odd dimension");
  return mu;
}

/// Unit vector fixed by u(g) (x) conj(u(g)), found as the joint kernel of the
/// Lie-algebra action S_a (x) I - I (x) S_a^T. Phase fixed so the first
/// component is real positive.
inline Vec invariant_vector(const SpinRep& rep, double tol = 1e-9) {
  const int d = rep.d;
  const Mat id = Mat::Identity(d, d);
  Mat stacked(3 * d * d, d * d);
  for (int a = 0; a < 3; ++a) {
    const Mat& s = rep.generator(a);
    stacked.block(a * d * d, 0, d * d, d * d) = kron(s, id) - kron(id, s.transpose());
  }
  const Mat ns = null_space(stacked, tol);
  if (ns.cols() != 1)
    throw InvalidArgument("fixed subspace has dimension " + std::to_string(ns.cols()) +
                          ", representation is not irreducible");
  Vec v = ns.col(0);
  Eigen::Index lead = 0;
  v.cwiseAbs().maxCoeff(&lead);
  v *= std::conj(v(lead)) / std::abs(v(lead));
  return v / v.norm();
}

}  // namespace fcs
