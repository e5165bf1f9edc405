#include <gtest/gtest.h>

#include "fcs/su2_repr.hpp"

using namespace fcs;

namespace {

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

}  // namespace

TEST(SpinRep, CommutatorsAndCasimir) {
  for (int d = 1; d <= 7; ++d) {
    const SpinRep r = build_spin_rep(d);
    EXPECT_DOUBLE_EQ(r.s, (d - 1) / 2.0);
    EXPECT_LE(max_abs(commutator(r.sx, r.sy) - kI * r.sz), 1e-12) << "d=" << d;
    EXPECT_LE(max_abs(commutator(r.sy, r.sz) - kI * r.sx), 1e-12) << "d=" << d;
    EXPECT_LE(max_abs(commutator(r.sz, r.sx) - kI * r.sy), 1e-12) << "d=" << d;
    EXPECT_LE(max_abs(r.casimir() - r.s * (r.s + 1) * Mat::Identity(d, d)), 1e-12);
    for (int a = 0; a < d; ++a) EXPECT_DOUBLE_EQ(r.sz(a, a).real(), r.m_label(a));
  }
}

TEST(SpinRep, RejectsNonPositiveDimension) {
  EXPECT_THROW(build_spin_rep(0), InvalidArgument);
  EXPECT_THROW(build_spin_rep(-3), InvalidArgument);
}

TEST(SpinRep, GroupElementsAreUnitaryWithUnitDeterminant) {
  Rng rng(11);
  for (int d = 1; d <= 5; ++d) {
    const SpinRep r = build_spin_rep(d);
    for (int s = 0; s < 10; ++s) {
      const GroupElement g = sample_group_element(r, rng);
      EXPECT_LE(max_abs(g.u * g.u.adjoint() - Mat::Identity(d, d)), 1e-12);
      EXPECT_NEAR(std::abs(g.u.determinant() - 1.0), 0.0, 1e-10);
    }
  }
}

TEST(Twist, SpinHalfMatchesDisplayedSigmaY) {
  // The twist for d = 2 is [[0, i], [-i, 0]].
  const TwistMatrix t = build_twist(build_spin_rep(2));
  Mat expected(2, 2);
  expected << 0.0, kI, -kI, 0.0;
  EXPECT_EQ(t.r0, expected);
  EXPECT_EQ(compute_mu(t), -1);
  EXPECT_EQ(t.zeta, cplx(0.0, -1.0));
  EXPECT_LE(max_abs(t.r_zeta().imag()), 0.0);
}

TEST(Twist, SpinOneIsSignedAntiDiagonal) {
  const TwistMatrix t = build_twist(build_spin_rep(3));
  Mat expected = Mat::Zero(3, 3);
  expected(0, 2) = 1.0;
  expected(1, 1) = -1.0;
  expected(2, 0) = 1.0;
  EXPECT_EQ(t.r0, expected);
  EXPECT_EQ(compute_mu(t), 1);
  EXPECT_EQ(t.zeta, cplx(1.0, 0.0));
}

TEST(Twist, SquaresToIdentityAndConjugatesTheIrrep) {
  Rng rng(5);
  for (int d = 1; d <= 7; ++d) {
    const SpinRep r = build_spin_rep(d);
    const TwistMatrix t = build_twist(r);
    EXPECT_LE(max_abs(t.r0 * t.r0 - Mat::Identity(d, d)), 1e-12);
    EXPECT_LE(max_abs(t.r0 * t.r0.adjoint() - Mat::Identity(d, d)), 1e-12);
    for (int s = 0; s < 20; ++s) {
      const GroupElement g = sample_group_element(r, rng);
      EXPECT_LE(max_abs(t.r0 * g.u * t.r0 - g.u.conjugate()), 1e-10) << "d=" << d;
    }
    EXPECT_EQ(compute_mu(t), d % 2 == 1 ? 1 : -1);
    EXPECT_LE(max_abs(t.r_zeta().imag()), 1e-15);
    EXPECT_LE(max_abs(t.r0.conjugate() - double(compute_mu(t)) * t.r0), 1e-15);
  }
}

TEST(Twist, ComputeMuRejectsNonInvolution) {
  TwistMatrix t = build_twist(build_spin_rep(3));
  t.r0 *= kI;
  EXPECT_THROW(compute_mu(t), InvalidArgument);
}

TEST(InvariantVector, IsTheMaximallyEntangledVector) {
  Rng rng(9);
  for (int d = 1; d <= 5; ++d) {
    const SpinRep r = build_spin_rep(d);
    const Vec v = invariant_vector(r);
    Vec expected = Vec::Zero(d * d);
    for (int i = 0; i < d; ++i) expected(i * d + i) = 1.0 / std::sqrt(double(d));
    EXPECT_LE((v - expected).cwiseAbs().maxCoeff(), 1e-9) << "d=" << d;
    const GroupElement g = sample_group_element(r, rng);
    EXPECT_LE((kron(g.u, g.u.conjugate()) * v - v).cwiseAbs().maxCoeff(), 1e-10);
  }
}
