#include <random>

#include <gtest/gtest.h>

#include "ridge/dynamics.h"
#include "ridge/objectives.h"
#include "ridge/verify.h"

namespace ridge {
namespace {

Vector V2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

TEST(CheckAssumptions, EmptySampleList) {
  const AssumptionReport r = check_assumptions(builtin_vi("bilinear"), {});
  EXPECT_EQ(r.a1_square, CheckStatus::kNotApplicable);
  EXPECT_EQ(r.a1_restricted, CheckStatus::kNotApplicable);
  EXPECT_EQ(r.a2, CheckStatus::kNotApplicable);
  EXPECT_EQ(r.a3, CheckStatus::kNotApplicable);
  EXPECT_EQ(r.samples, 0);
  EXPECT_TRUE(r.all_pass_or_na());
}

TEST(CheckAssumptions, BilinearSquareBlockFailsRestrictedPasses) {
  const VIProblem p = builtin_vi("bilinear");
  const AssumptionReport r = check_assumptions(p, {{V2(1, 0.5), {0}, 1}});
  EXPECT_EQ(r.a2, CheckStatus::kPass);
  EXPECT_EQ(r.a1_square, CheckStatus::kFail);
  EXPECT_EQ(r.a1_restricted, CheckStatus::kPass);
  ASSERT_TRUE(r.sigma_min.has_value());
  EXPECT_NEAR(*r.sigma_min, 1.0, 1e-15);
  ASSERT_EQ(r.witnesses.size(), 1u);
  EXPECT_EQ(r.witnesses[0].assumption, "A1-square");
  EXPECT_EQ(r.witnesses[0].value, 0.0);
  EXPECT_EQ(r.witnesses[0].sample.x, V2(1, 0.5));
}

TEST(CheckAssumptions, BilinearExitPointA3) {
  const VIProblem p = builtin_vi("bilinear");
  const AssumptionReport r = check_assumptions(p, {{V2(1, 0), {}, 0}});
  EXPECT_EQ(r.a3, CheckStatus::kPass);
  EXPECT_EQ(r.a2, CheckStatus::kPass);
  EXPECT_EQ(r.a3_checked, 1);
}

TEST(CheckAssumptions, A2FailsWithTwoFaces) {
  // V1 vanishes at the corner, where both moving coordinates sit on faces.
  const VIProblem q("corner", BoxDomain::unit(2),
                    [](const Vector& x) { return V2(x[0] + x[1], 1.0); },
                    [](const Vector&) {
                      Matrix j(2, 2);
                      j << 1, 1, 0, 0;
                      return j;
                    });
  const AssumptionReport r = check_assumptions(q, {{V2(0, 0), {0}, 1}});
  EXPECT_EQ(r.a2, CheckStatus::kFail);
  EXPECT_FALSE(r.all_pass_or_na());
}

TEST(CheckAssumptions, A3FailsWhenDirectionVanishesAtFace) {
  // V1 = x2 on S = {1}, i = 2: d = (+-1, 0), and x2 = 0 is on a face with d2 = 0.
  const VIProblem q("flat", BoxDomain::unit(2), [](const Vector& x) { return V2(x[1], 1.0); },
                    [](const Vector&) {
                      Matrix j(2, 2);
                      j << 0, 1, 0, 0;
                      return j;
                    });
  const AssumptionReport r = check_assumptions(q, {{V2(0.5, 0.0), {0}, 1}});
  EXPECT_EQ(r.a3, CheckStatus::kFail);
  bool found = false;
  for (const auto& w : r.witnesses) found = found || w.assumption == "A3";
  EXPECT_TRUE(found);
}

TEST(CheckAssumptions, LinearMapPerturbationExitPoints) {
  const VIProblem base = builtin_vi("bilinear");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const VIProblem q = perturb(base, {PerturbationKind::kLinearMap, 1e-3, seed});
    SolverConfig c;
    const Trajectory t = run_stonr(q, c);
    AssumptionTolerances tol;
    tol.zero_tol = c.epsilon;
    const AssumptionReport r = check_assumptions(q, samples_from_trajectory(t), tol);
    EXPECT_NE(r.a3, CheckStatus::kFail) << "seed " << seed;
  }
}

TEST(DetectPivot, Examples) {
  const VIProblem p = builtin_vi("bilinear");
  const PivotCheck origin = detect_pivot(p, V2(0, 0));
  EXPECT_TRUE(origin.is_pivot);
  EXPECT_EQ(*origin.ell, 0);

  const PivotCheck corner = detect_pivot(p, V2(1, 0));
  EXPECT_TRUE(corner.is_pivot);
  EXPECT_EQ(*corner.ell, 1);

  const PivotCheck inner = detect_pivot(p, V2(0.3, 0.3));
  EXPECT_FALSE(inner.is_pivot);
  EXPECT_EQ(*inner.ell, 0);
  // V2 = -0.2 is unsatisfied too, so bullet 1 is the first to fail.
  EXPECT_EQ(inner.failing_bullet, 1);
  EXPECT_EQ(inner.failing_bullets, (std::vector<int>{1, 2, 3}));

  const PivotCheck sol = detect_pivot(p, V2(0.5, 0.5));
  EXPECT_TRUE(sol.is_pivot);
  EXPECT_FALSE(sol.ell.has_value());
}

TEST(DetectPivot, OriginOfEveryBuiltin) {
  for (const auto& name : builtin_names()) {
    EXPECT_TRUE(detect_pivot(builtin_vi(name), Vector::Zero(2)).is_pivot) << name;
  }
}

TEST(DetectPivot, BulletOneAndTwo) {
  const VIProblem p = builtin_vi("bilinear");
  // (0.3, 1): V1 = -0.5 with x1 interior -> unsatisfied with negative value.
  EXPECT_EQ(detect_pivot(p, V2(0.3, 1.0)).failing_bullet, 1);
  // (0, 0.3): l = 1, V2 = -0.5 and x2 != 0; x1 sits on a face.
  EXPECT_EQ(detect_pivot(p, V2(0.0, 0.3)).failing_bullets, (std::vector<int>{1, 2}));
  // (0.3, 0): only V1 is unsatisfied and it is positive, but x2 != 0 and
  // nothing in M + {l} is on a face.
  EXPECT_EQ(detect_pivot(p, V2(0.3, 0.0)).failing_bullets, (std::vector<int>{3}));
}

TEST(DetectPivot, LooseningToleranceKeepsBulletsOneTwo) {
  const VIProblem p = builtin_vi("f2");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    Vector x = V2(k % 3 == 0 ? 0.0 : u(rng), k % 2 == 0 ? 0.0 : u(rng));
    const PivotCheck tight = detect_pivot(p, x, {1e-9, 1e-12});
    const PivotCheck loose = detect_pivot(p, x, {1e-3, 1e-12});
    if (tight.is_pivot) EXPECT_NE(loose.failing_bullet, 1);
    if (tight.is_pivot) EXPECT_NE(loose.failing_bullet, 2);
  }
}

TEST(Parity, GoldenRunsPassEveryCheck) {
  for (const std::string name : {"bilinear", "f2", "f1"}) {
    const VIProblem p = builtin_vi(name);
    SolverConfig c;
    const ParityReport r = parity_diagnostics(p, run_stonr(p, c), c);
    ASSERT_EQ(r.checks.size(), 5u);
    for (const auto& chk : r.checks) {
      EXPECT_TRUE(chk.passed) << name << " check " << chk.id << ": "
                              << (chk.witnesses.empty() ? "" : chk.witnesses.front());
    }
  }
}

TEST(Parity, BilinearChecksCoverEveryEpoch) {
  const VIProblem p = builtin_vi("bilinear");
  const ParityReport r = parity_diagnostics(p, run_stonr(p, {}), {});
  EXPECT_EQ(r.check("a").checked, 4);
  EXPECT_EQ(r.check("b").checked, 3);
  EXPECT_EQ(r.check("c").checked, 3);
  EXPECT_EQ(r.check("e").checked, 3);
  EXPECT_THROW(r.check("z"), std::out_of_range);
}

TEST(Parity, TruncatedRunFailsPivotCheck) {
  const VIProblem p = builtin_vi("bilinear");
  Trajectory t = run_stonr(p, {});
  // Cut inside epoch (2, {}) halfway up the right face.
  std::size_t cut = 0;
  for (std::size_t r = 0; r < t.records.size(); ++r) {
    if (t.records[r].i == 1 && t.records[r].s_mask == 0 && t.records[r].x[1] > 0.25) {
      cut = r;
      break;
    }
  }
  ASSERT_GT(cut, 0u);
  t.records.resize(cut + 1);
  const ParityReport r = parity_diagnostics(p, t, {});
  EXPECT_FALSE(r.check("a").passed);
  ASSERT_FALSE(r.check("a").witnesses.empty());
  EXPECT_NE(r.check("a").witnesses.front().find("row " + std::to_string(cut)), std::string::npos);
  EXPECT_FALSE(r.all_passed());
}

TEST(Parity, RepeatedStartIsFlagged) {
  const VIProblem p = builtin_vi("bilinear");
  Trajectory t = run_stonr(p, {});
  TrajectoryRecord dup = t.records.front();
  dup.step = t.records.back().step;
  t.records.push_back(dup);
  EXPECT_FALSE(parity_diagnostics(p, t, {}).check("b").passed);
}

}  // namespace
}  // namespace ridge
