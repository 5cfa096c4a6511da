#include <gtest/gtest.h>

#include "mavar/error.hpp"
#include "mavar/fixtures.hpp"
#include "mavar/linalg.hpp"
#include "mavar/perturb.hpp"
#include "mavar/poisson.hpp"
#include "support.hpp"

using namespace mavar;
using namespace mavar::test;

namespace {

Observable obs(const Chain& c, const Vector& v) { return Observable(v, c.pi); }

/// The lazy cycle turns (I - P1) phi = f into phi_i - phi_{i+1} = 2 f_i:
/// integrate the increments, then center.
Vector cyclic_oracle(const Vector& f) {
  Vector phi(f.size());
  phi(0) = 0.0;
  for (Eigen::Index i = 0; i + 1 < f.size(); ++i) phi(i + 1) = phi(i) - 2.0 * f(i);
  return phi.array() - phi.mean();
}

}  // namespace

TEST(Variance, InfiniteComparesAboveEverything) {
  EXPECT_LT(Variance::finite(1e300), Variance::infinite());
  EXPECT_EQ(Variance::infinite(), Variance::infinite());
  EXPECT_LT(Variance::finite(1.0), Variance::finite(2.0));
  EXPECT_THROW(Variance::infinite().value(), Error);
}

TEST(SolvePoisson, PublishedSolutions) {
  const Chain p1 = chain(fixtures::chen_p1());
  const Observable phi21 = solve_poisson(p1.p, p1.pi, obs(p1, fixtures::chen_f2()));
  const Vector expected21 = vec({1.0 / 3, -5.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3});
  EXPECT_LE(max_abs(phi21.values() - expected21), 1e-12);

  const Chain p2 = chain(fixtures::chen_p2());
  const Observable phi12 = solve_poisson(p2.p, p2.pi, obs(p2, fixtures::chen_f1()));
  EXPECT_LE(max_abs(phi12.values() - vec({-0.5, 0.5, 1.5, 0.5, -0.5, -1.5})), 1e-12);

  const Observable zero = solve_poisson(p1.p, p1.pi, obs(p1, Vector::Zero(6)));
  EXPECT_EQ(max_abs(zero.values()), 0.0);
}

TEST(SolvePoisson, LazyCycleMatchesIncrementOracle) {
  const Chain p1 = chain(fixtures::chen_p1());
  const Vector f1 = fixtures::chen_f1();
  const Observable phi = solve_poisson(p1.p, p1.pi, obs(p1, f1));
  EXPECT_LE(max_abs(phi.values() - cyclic_oracle(f1)), 1e-12);
  EXPECT_NEAR(sigma2(p1.p, p1.pi, obs(p1, f1)), 1.0 / 3, 1e-12);

  // The printed solution misses by a factor: (I - P1) phi11 = (5/4) f1.
  const Vector printed = fixtures::chen_phi11_printed();
  EXPECT_LE(max_abs(printed - p1.p.matrix() * printed - 1.25 * f1), 1e-15);
}

TEST(SolvePoisson, Errors) {
  const Chain p1 = chain(fixtures::chen_p1());
  try {
    solve_poisson(p1.p, p1.pi, obs(p1, Vector::Ones(6)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotCentered);
  }
  // Deterministic rotation: periodic and not reversible.
  Matrix rot = Matrix::Zero(3, 3);
  rot(0, 1) = rot(1, 2) = rot(2, 0) = 1.0;
  const Chain r = chain(rot);
  try {
    solve_poisson(r.p, r.pi, obs(r, vec({1, -1, 0})));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateKernel);
    ASSERT_TRUE(e.value().has_value());
    EXPECT_NEAR(*e.value(), 1.0, 1e-12);
  }
}

TEST(DualPair, PublishedValues) {
  const Chain p2 = chain(fixtures::chen_p2());
  EXPECT_NEAR(solve_dual_pair(p2.p, p2.pi, obs(p2, fixtures::chen_f1())).sigma2, 0.5, 1e-12);

  const Chain a = chain(fixtures::two_nonrev_p1());
  const Chain b = chain(fixtures::two_nonrev_p2());
  const Vector f = vec({1, 1, -11.0 / 3});
  EXPECT_NEAR(sigma2(b.p, b.pi, obs(b, f)) - sigma2(a.p, a.pi, obs(a, f)), 1.0 / 42, 1e-12);
}

TEST(DualPair, InvariantsOnRandomChains) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Chain c = random_chain(rng, 2 + trial % 11);
    const Observable f = obs(c, random::centered_vector(c.pi, rng));
    const PoissonSolution s = solve_dual_pair(c.p, c.pi, f);
    const Matrix star = adjoint(c.p, c.pi).matrix();
    const double scale = std::max(1.0, max_abs(f.values()));
    EXPECT_NEAR(s.phi.pi_mean(), 0.0, 1e-10);
    EXPECT_NEAR(s.phi_star.pi_mean(), 0.0, 1e-10);
    EXPECT_LE(max_abs(s.phi.values() - c.p.matrix() * s.phi.values() - f.values()), 1e-10 * scale);
    EXPECT_LE(max_abs(s.phi_star.values() - star * s.phi_star.values() - f.values()),
              1e-10 * scale);
    EXPECT_NEAR(pi_inner(s.phi, f, c.pi), pi_inner(f, s.phi_star, c.pi), 1e-10);
    EXPECT_GE(s.avar, -1e-10);
    EXPECT_NEAR(s.sigma2, sigma2_oracle(c.p.matrix(), c.pi.weights(), f.values()),
                1e-9 * std::max(1.0, s.sigma2));
  }
}

TEST(OperatorT, RoutesAgree) {
  const Chain p1 = chain(fixtures::chen_p1());
  EXPECT_NEAR(avar_via_t(p1.p, p1.pi, obs(p1, fixtures::chen_f2())), 1.0 / 3, 1e-12);

  const Chain a = chain(fixtures::two_nonrev_p1());
  const Chain b = chain(fixtures::two_nonrev_p2());
  const Vector f = vec({2, 1, -14.0 / 3});
  EXPECT_NEAR(avar_via_t(b.p, b.pi, obs(b, f)) - avar_via_t(a.p, a.pi, obs(a, f)), -2.0 / 21,
              1e-12);
}

TEST(OperatorT, ReducesToIMinusPForReversible) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const Chain c = random_reversible(rng, 2 + trial % 8);
    const Matrix t = operator_t(c.p, c.pi);
    const Matrix ipm = Matrix::Identity(c.p.size(), c.p.size()) - c.p.matrix();
    // T and I - P agree on the mean-zero subspace.
    const Matrix cproj = centering_projector(c.pi);
    EXPECT_LE(max_abs((t - ipm) * cproj), 1e-10);
  }
}

TEST(OperatorT, PositiveSemidefiniteOnMeanZero) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    const Chain c = random_chain(rng, 2 + trial % 11);
    const Matrix t = operator_t(c.p, c.pi);
    const Matrix basis = mean_zero_basis(c.pi, 0);
    const Matrix d = c.pi.weights().asDiagonal();
    Matrix q = basis.transpose() * d * t * basis;
    q = 0.5 * (q + q.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(q);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
  }
}

TEST(Spectral, PublishedAndTrivialValues) {
  const Chain p2 = chain(fixtures::chen_p2());
  const Variance v = avar_spectral(p2.p, p2.pi, obs(p2, fixtures::chen_f1()));
  ASSERT_TRUE(v.is_finite());
  EXPECT_NEAR(v.value(), 0.5, 1e-12);

  const Chain u = chain(fixtures::uniform3_k());
  const Vector f = vec({1, -1, 0});
  EXPECT_NEAR(avar_spectral(u.p, u.pi, obs(u, f)).value(), pi_inner(f, f, u.pi), 1e-12);

  const Chain p = chain(fixtures::fk_p());
  EXPECT_NEAR(avar_spectral(p.p, p.pi, obs(p, f)).value(), 4.0 / 9, 1e-12);
}

TEST(Spectral, PeriodicFlipIsFiniteBecauseMinusOneIsNotUnit) {
  Matrix flip(2, 2);
  flip << 0, 1, 1, 0;
  const Chain c = chain(flip);
  // (I - P) phi = f with f = (1, -1): phi = f / 2, sigma^2 = 1/2.
  EXPECT_NEAR(avar_spectral(c.p, c.pi, obs(c, vec({1, -1}))).value(), 0.5, 1e-12);
}

TEST(Spectral, RejectsNonReversible) {
  const Chain p1 = chain(fixtures::chen_p1());
  EXPECT_THROW(avar_spectral(p1.p, p1.pi, obs(p1, fixtures::chen_f1())), Error);
}

TEST(Resolvent, ConvergesMonotonically) {
  const Chain p2 = chain(fixtures::chen_p2());
  const Observable f = obs(p2, fixtures::chen_f1());
  const ResolventCurve curve = resolvent_curve(p2.p, p2.pi, f, {1, 0.1, 0.01, 0.001});
  EXPECT_TRUE(curve.reversible);
  EXPECT_TRUE(curve.monotone);
  for (std::size_t i = 1; i < curve.values.size(); ++i) {
    EXPECT_GT(curve.values[i], curve.values[i - 1]);
  }
  EXPECT_LE(std::abs(curve.values.back() - 0.5), 10 * 0.001);
  EXPECT_LE(curve.beta_norms.back(), 1e-2 * pi_inner(f, f, p2.pi));
}

TEST(Resolvent, UniformKernelHalvesF) {
  const Chain u = chain(fixtures::uniform3_k());
  const Vector f = vec({1, -1, 0});
  const ResolventCurve curve = resolvent_curve(u.p, u.pi, obs(u, f), {1.0});
  EXPECT_NEAR(curve.values[0], pi_inner(f, f, u.pi) / 2, 1e-14);
}

TEST(Resolvent, RejectsBadBetas) {
  const Chain u = chain(fixtures::uniform3_k());
  const Observable f = obs(u, vec({1, -1, 0}));
  EXPECT_THROW(resolvent_curve(u.p, u.pi, f, {0.1, 0.5}), Error);
  EXPECT_THROW(resolvent_curve(u.p, u.pi, f, {-1.0}), Error);
}

TEST(Resolvent, MonotoneForRandomReversible) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 30; ++trial) {
    const Chain c = random_reversible(rng, 2 + trial % 9);
    const Observable f = obs(c, random::centered_vector(c.pi, rng));
    const ResolventCurve curve = resolvent_curve(c.p, c.pi, f, {10, 1, 0.1, 0.01, 1e-3, 1e-4});
    EXPECT_TRUE(curve.monotone);
  }
}

TEST(DualEquality, AdjointAndAlphaFamily) {
  const Chain p1 = chain(fixtures::chen_p1());
  const auto [a, b] = check_dual_equality(p1.p, p1.pi, obs(p1, fixtures::chen_f1()));
  EXPECT_NEAR(a, b, 1e-10);

  const Chain k = chain(fixtures::uniform3_k());
  const Matrix gamma = Matrix(fixtures::uniform3_weighted_vorticity()) * 3.0;
  const VorticitySpec spec = validate_vorticity(k.p, k.pi, gamma);
  const Vector f = vec({1, 0.5, -1.5});
  for (double alpha : {0.25, 0.5, 1.0}) {
    const StochasticKernel plus = family_alpha(k.p, k.pi, spec, alpha);
    const StochasticKernel minus = family_alpha(k.p, k.pi, spec, -alpha);
    EXPECT_NEAR(asymptotic_variance(plus, k.pi, obs(k, f)),
                asymptotic_variance(minus, k.pi, obs(k, f)), 1e-10);
  }
}

TEST(VarianceForm, ReproducesSigma2) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 30; ++trial) {
    const Chain c = random_chain(rng, 2 + trial % 9);
    const Matrix s = variance_form(c.p, c.pi);
    EXPECT_LE(max_abs(s - s.transpose()), 1e-12);
    const Vector f = random::centered_vector(c.pi, rng);
    EXPECT_NEAR(f.dot(s * f), sigma2(c.p, c.pi, obs(c, f)), 1e-9);
  }
}

TEST(MeanZeroSolver, RejectsSingularOperator) {
  const Chain c = chain(fixtures::uniform3_k());
  EXPECT_THROW(MeanZeroSolver(Matrix::Zero(3, 3), c.pi, ErrorCode::SingularK), Error);
}
