#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ridge/dynamics.h"
#include "ridge/objectives.h"

namespace ridge {
namespace {

Vector V2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

TEST(SmoothStep, Values) {
  EXPECT_EQ(smooth_step(-1.0), 0.0);
  EXPECT_EQ(smooth_step(0.0), 0.0);
  EXPECT_EQ(smooth_step(1.0), 1.0);
  EXPECT_EQ(smooth_step(3.0), 1.0);
  EXPECT_DOUBLE_EQ(smooth_step(0.5), 0.5);
  EXPECT_DOUBLE_EQ(smooth_step_derivative(0.5), 1.5);
}

TEST(SmoothStep, MonotoneAndC1) {
  double prev = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double s = smooth_step(k / 1000.0);
    EXPECT_GE(s, prev);
    prev = s;
  }
  const double h = 1e-7;
  EXPECT_LE(std::abs(smooth_step_derivative(h) - smooth_step_derivative(-h)), 1e-6);
  EXPECT_LE(std::abs(smooth_step_derivative(1.0 - h) - smooth_step_derivative(1.0 + h)), 1e-6);
  EXPECT_LE(std::abs(smooth_step_derivative(0.0)), 1e-12);
  EXPECT_LE(std::abs(smooth_step_derivative(1.0)), 1e-12);
}

TEST(Builtins, Registry) {
  EXPECT_EQ(builtin_names().size(), 4u);
  EXPECT_THROW(builtin("nope"), std::invalid_argument);
  EXPECT_EQ(builtin("bilinear").domain, BoxDomain::unit(2));
  EXPECT_EQ(builtin("f1").domain.lower(), V2(-1, -1));
  for (const auto& n : builtin_names()) {
    const auto b = builtin(n);
    EXPECT_EQ(b.objective->roles[0], Role::kMinimizing);
    EXPECT_EQ(b.objective->roles[1], Role::kMaximizing);
  }
}

TEST(Builtins, StationaryPoints) {
  EXPECT_LT(builtin("bilinear").objective->gradient(V2(0.5, 0.5)).norm(), 1e-15);
  EXPECT_LT(builtin("f2").objective->gradient(V2(0, 0)).norm(), 1e-15);
  EXPECT_LT(builtin("f1").objective->gradient(V2(0, 0)).norm(), 1e-15);
}

// Reference values from an independent symbolic differentiation.
TEST(Builtins, SymbolicReferenceValues) {
  const auto f1 = builtin("f1").objective;
  const Vector u = V2(0.3, -0.7);
  const Vector g1 = f1->gradient(u);
  EXPECT_NEAR(g1[0], -7.0941526589679835, 1e-12);
  EXPECT_NEAR(g1[1], 3.284319909790585, 1e-12);
  const Matrix h1 = f1->hessian(u);
  EXPECT_NEAR(h1(0, 0), -9.366027931450512, 1e-11);
  EXPECT_NEAR(h1(0, 1), 5.819247439413684, 1e-11);
  EXPECT_NEAR(h1(1, 1), -2.436502447632939, 1e-11);

  const auto f2 = builtin("f2").objective;
  const Vector g2 = f2->gradient(u);
  EXPECT_NEAR(g2[0], 0.71816038, 1e-7);
  EXPECT_NEAR(g2[1], -0.3008673, 1e-7);
  const Matrix h2 = f2->hessian(u);
  EXPECT_NEAR(h2(0, 0), 0.0716478, 1e-7);
  EXPECT_NEAR(h2(0, 1), -1.0778176, 1e-7);
  EXPECT_NEAR(h2(1, 1), 0.3038826, 1e-7);

  const auto ns = builtin("neg_square").objective;
  EXPECT_NEAR((ns->gradient(u) - V2(-2.0, 2.0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR(builtin("bilinear").objective->gradient(V2(0.3, 0.8))[0], 0.3, 1e-15);
}

TEST(Builtins, DerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (const auto& name : builtin_names()) {
    const auto b = builtin(name);
    const VIProblem p = b.to_vi();
    for (int k = 0; k < 100; ++k) {
      const Vector x = V2(u(rng), u(rng));
      const Matrix an = p.evaluate_jacobian(x);
      const Matrix fd = finite_diff_jacobian(p, x, 1e-6);
      EXPECT_LE((an - fd).cwiseAbs().maxCoeff(), 1e-5 * std::max(1.0, an.cwiseAbs().maxCoeff()))
          << name;
      // Gradient against differences of the value.
      const Vector uu = b.domain.from_unit(x);
      const Vector g = b.objective->gradient(uu);
      for (int j = 0; j < 2; ++j) {
        Vector up = uu, dn = uu;
        up[j] += 1e-6;
        dn[j] -= 1e-6;
        const double fdg = (b.objective->value(up) - b.objective->value(dn)) / 2e-6;
        EXPECT_LE(std::abs(fdg - g[j]), 1e-5 * std::max(1.0, std::abs(g[j]))) << name;
      }
    }
  }
}

TEST(Perturb, ZeroMagnitudeIsIdentity) {
  const VIProblem p = builtin_vi("f1");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto kind : {PerturbationKind::kSinusoidalBias, PerturbationKind::kLinearMap,
                    PerturbationKind::kBoundaryShrink}) {
    const VIProblem q = perturb(p, {kind, 0.0, 42});
    for (int k = 0; k < 100; ++k) {
      const Vector x = V2(u(rng), u(rng));
      EXPECT_EQ(q.evaluate_v(x), p.evaluate_v(x));
    }
  }
}

TEST(Perturb, SeededAndReproducible) {
  const VIProblem p = builtin_vi("bilinear");
  for (auto kind : {PerturbationKind::kSinusoidalBias, PerturbationKind::kLinearMap,
                    PerturbationKind::kBoundaryShrink}) {
    const VIProblem a = perturb(p, {kind, 1e-2, 7});
    const VIProblem b = perturb(p, {kind, 1e-2, 7});
    const VIProblem c = perturb(p, {kind, 1e-2, 8});
    const Vector x = V2(0.3, 0.6);
    EXPECT_EQ(a.evaluate_v(x), b.evaluate_v(x));
    EXPECT_NE(a.evaluate_v(x), c.evaluate_v(x));
  }
}

TEST(Perturb, JacobiansStayConsistent) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const VIProblem p = builtin_vi("f2");
  for (auto kind : {PerturbationKind::kSinusoidalBias, PerturbationKind::kLinearMap,
                    PerturbationKind::kBoundaryShrink}) {
    const VIProblem q = perturb(p, {kind, 0.1, 5});
    for (int k = 0; k < 30; ++k) {
      const Vector x = V2(u(rng), u(rng));
      const Matrix an = q.evaluate_jacobian(x);
      EXPECT_LE((an - finite_diff_jacobian(q, x, 1e-6)).cwiseAbs().maxCoeff(),
                1e-5 * std::max(1.0, an.cwiseAbs().maxCoeff()));
    }
  }
}

TEST(Perturb, SinusoidalBiasMagnitude) {
  const VIProblem p = builtin_vi("bilinear");
  const VIProblem q = perturb(p, {PerturbationKind::kSinusoidalBias, 1e-3, 1});
  const Vector x = V2(0.4, 0.1);
  EXPECT_LE((q.evaluate_v(x) - p.evaluate_v(x)).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Perturb, BoundaryShrinkBoxAndLimits) {
  const VIProblem p = builtin_vi("f1");
  EXPECT_THROW(perturb(p, {PerturbationKind::kBoundaryShrink, 0.5, 1}), std::invalid_argument);
  EXPECT_THROW(perturb(p, {PerturbationKind::kLinearMap, -1.0, 1}), std::invalid_argument);
  const VIProblem q = perturb(p, {PerturbationKind::kBoundaryShrink, 0.1, 1});
  const Vector lo = q.domain().lower();
  const Vector hi = q.domain().upper();
  for (int j = 0; j < 2; ++j) {
    EXPECT_GE(lo[j], -1.0);
    EXPECT_LE(lo[j], -1.0 + 0.2);
    EXPECT_LE(hi[j], 1.0);
    EXPECT_GE(hi[j], 1.0 - 0.2);
  }
  // The problem-unit field is unchanged inside the shrunk box.
  const Vector u = V2(0.2, -0.3);
  EXPECT_LE((q.evaluate_v_problem(u) - p.evaluate_v_problem(u)).norm(), 1e-12);
}

TEST(Perturb, LinearMapGapTransfers) {
  // An alpha-solution of the perturbed problem is an (alpha + O(eps n))
  // solution of the original.
  const VIProblem p = builtin_vi("bilinear");
  const double eps = 1e-3;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const VIProblem q = perturb(p, {PerturbationKind::kLinearMap, eps, seed});
    const Trajectory t = run_stonr(q, {});
    ASSERT_EQ(t.status, TerminalStatus::kSolved) << seed;
    const Vector x = q.domain().to_unit(t.records.back().x);
    EXPECT_LE(vi_gap(p, x), 1e-3 + 4.0 * eps * 2) << seed;
  }
}

TEST(Perturb, BoundaryShrinkBilinearStillSolves) {
  const VIProblem p = builtin_vi("bilinear");
  const double eps = 1e-2;
  const VIProblem q = perturb(p, {PerturbationKind::kBoundaryShrink, eps, 3});
  const Trajectory t = run_stonr(q, {});
  ASSERT_EQ(t.status, TerminalStatus::kSolved);
  EXPECT_LE(vi_gap(q, q.domain().to_unit(t.records.back().x)), 1e-3);
  EXPECT_LE((t.records.back().x - V2(0.5, 0.5)).norm(), 5.0 * eps);
}

}  // namespace
}  // namespace ridge
