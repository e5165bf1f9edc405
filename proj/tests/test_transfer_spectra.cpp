#include <gtest/gtest.h>

#include "fcs/su2_repr.hpp"
#include "fcs/transfer_spectra.hpp"
#include "test_util.hpp"

using namespace fcs;

TEST(Transfer, AkltSpectrum) {
  const FcsState st = fixed_point(witness::aklt());
  const GapReport g = gap(build_transfer(st));
  ASSERT_EQ(g.eigenvalues.size(), 4);
  EXPECT_LE(std::abs(g.eigenvalues(0) - 1.0), 1e-10);
  for (int i = 1; i < 4; ++i) EXPECT_LE(std::abs(g.eigenvalues(i) + 1.0 / 3.0), 1e-10);
  EXPECT_NEAR(g.delta, 1.0 / 3.0, 1e-10);
  EXPECT_LE(g.selfadjoint_defect, 1e-14);
  EXPECT_NEAR(g.delta_from_square, 1.0 / 3.0, 1e-10);
  EXPECT_TRUE(g.ergodic);
}

TEST(Transfer, CyclicVectorIsFixed) {
  Rng rng(41);
  const FcsState st = test_support::random_ergodic_state(rng, 3, 3);
  const TransferOperator t = build_transfer(st);
  EXPECT_LE((t.matrix * t.cyclic - t.cyclic).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((t.matrix.adjoint() * t.cyclic - t.cyclic).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(t.cyclic.norm(), 1.0, 1e-14);
}

TEST(Transfer, AkltTwoPointValues) {
  const FcsState st = fixed_point(witness::aklt());
  const SpinRep rep = build_spin_rep(3);
  for (int n = 1; n <= 8; ++n) {
    const cplx c = two_point(st, rep.sz, rep.sz, n);
    EXPECT_NEAR(c.real(), 4.0 / 3.0 * std::pow(-1.0 / 3.0, n), 1e-13) << "n=" << n;
    EXPECT_NEAR(c.imag(), 0.0, 1e-14);
  }
  EXPECT_THROW(two_point(st, rep.sz, rep.sz, 0), InvalidArgument);
}

TEST(Transfer, TwoPointMatchesExplicitWindows) {
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const FcsState st = test_support::random_ergodic_state(rng, 2, 2);
    const Mat a = random_gaussian(rng, 2, 2), b = random_gaussian(rng, 2, 2);
    const cplx wa = evaluate_local(st, {0, 0, a}), wb = evaluate_local(st, {0, 0, b});
    for (int n = 1; n <= 5; ++n) {
      std::vector<Mat> factors(n + 1, Mat::Identity(2, 2));
      factors.front() = a;
      factors.back() = b;
      const cplx direct = evaluate_local(st, LocalObservable::product(0, factors)) - wa * wb;
      EXPECT_LE(std::abs(two_point(st, a, b, n) - direct), 1e-12);
    }
  }
}

TEST(Decay, AkltCertificate) {
  const FcsState st = fixed_point(witness::aklt());
  const SpinRep rep = build_spin_rep(3);
  const DecayCertificate cert = decay_certificate(st, rep.sz, rep.sz, 30);
  EXPECT_TRUE(cert.pass);
  EXPECT_TRUE(cert.selfadjoint);
  EXPECT_DOUBLE_EQ(cert.constant, 1.0);
  EXPECT_NEAR(cert.beta_sup, std::log(3.0), 1e-9);
  EXPECT_TRUE(cert.violations.empty());
  ASSERT_EQ(cert.rows.size(), 30u);
  for (std::size_t i = 1; i < 10; ++i) EXPECT_NEAR(cert.rows[i].ratio, -1.0 / 3.0, 1e-9);
  // alpha and beta are parallel, so the bound is attained.
  EXPECT_NEAR(cert.rows[0].bound, cert.rows[0].abs_corr, 1e-14);
}

TEST(Decay, NonErgodicStateFails) {
  const FcsState st = fixed_point(witness::direct_sum(witness::aklt(), witness::aklt()));
  const SpinRep rep = build_spin_rep(3);
  const DecayCertificate cert = decay_certificate(st, rep.sz, rep.sz, 5);
  EXPECT_FALSE(cert.pass);
  EXPECT_DOUBLE_EQ(cert.delta, 1.0);
}

TEST(Decay, ProductStateHasNoCorrelations) {
  Vec xi = Vec::Zero(3);
  xi(0) = 1.0;
  const FcsState st = fixed_point(witness::product_state(xi));
  const SpinRep rep = build_spin_rep(3);
  const DecayCertificate cert = decay_certificate(st, rep.sx, rep.sz, 4);
  EXPECT_TRUE(cert.pass);
  for (const auto& row : cert.rows) EXPECT_EQ(row.abs_corr, 0.0);
  EXPECT_TRUE(std::isinf(cert.beta_sup));
}

TEST(Decay, NonSelfAdjointBoundHolds) {
  Rng rng(47);
  for (int trial = 0; trial < 10; ++trial) {
    const FcsState st = test_support::random_ergodic_state(rng, 3, 3);
    const Mat a = random_hermitian(rng, 3), b = random_hermitian(rng, 3);
    const DecayCertificate cert = decay_certificate(st, a, b, 20);
    EXPECT_FALSE(cert.selfadjoint);
    EXPECT_GE(cert.constant, 1.0);
    EXPECT_TRUE(cert.pass) << "trial " << trial;
  }
}
