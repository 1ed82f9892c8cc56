// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ridge/baselines.h"
#include "ridge/cli_app.h"
#include "ridge/direction.h"
#include "ridge/dynamics.h"
#include "ridge/errors.h"
#include "ridge/objectives.h"
#include "ridge/trajectory_io.h"
#include "ridge/verify.h"

namespace fs = std::filesystem;
using namespace ridge;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Vector V2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<EpochState> epoch_sequence(const Trajectory& t) {
  std::vector<EpochState> out;
  for (const auto& r : t.records) {
    if (r.event == event_tag::kStart) out.push_back({r.i, CoordinateSet(r.s_mask)});
  }
  return out;
}

double final_gap(const VIProblem& p, const Trajectory& t) {
  return vi_gap(p, p.domain().to_unit(t.records.back().x));
}

bool visits(const Trajectory& t, const Vector& target, double radius) {
  return std::any_of(t.records.begin(), t.records.end(),
                     [&](const TrajectoryRecord& r) { return (r.x - target).norm() <= radius; });
}

SolverConfig golden_config() {
  SolverConfig c;
  c.gamma = c.epsilon = c.alpha = 1e-3;
  return c;
}

Outcome c1_bilinear() {
  const auto t0 = std::chrono::steady_clock::now();
  const VIProblem p = builtin_vi("bilinear");
  const Trajectory t = run_stonr(p, golden_config());
  const double secs = seconds_since(t0);
  const std::vector<EpochState> want{{0, {}}, {1, {}}, {1, {0}}};
  const bool seq = epoch_sequence(t) == want;
  const bool v1 = visits(t, V2(1.0, 0.0), 2e-3);
  const bool v2 = visits(t, V2(1.0, 0.5), 2e-3);
  const double gap = final_gap(p, t);
  const double dist = (t.records.back().x - V2(0.5, 0.5)).norm();
  std::ostringstream os;
  os << "epochs " << (seq ? "ok" : "wrong") << ", visits (1,0) " << v1 << ", (1,0.5) " << v2
     << ", gap " << gap << ", dist " << dist << ", " << secs << " s";
  return {t.status == TerminalStatus::kSolved && seq && v1 && v2 && gap <= 1e-3 && dist <= 1e-2 &&
              secs < 5.0,
          os.str()};
}

Outcome converge_to_origin(const std::string& name) {
  const auto t0 = std::chrono::steady_clock::now();
  const VIProblem p = builtin_vi(name);
  const Trajectory t = run_stonr(p, golden_config());
  const double secs = seconds_since(t0);
  const double gap = final_gap(p, t);
  const double dist = t.records.back().x.norm();
  std::ostringstream os;
  os << to_string(t.status) << ", final (" << t.records.back().x[0] << ", "
     << t.records.back().x[1] << "), dist " << dist << ", gap " << gap << ", " << secs << " s";
  return {t.status == TerminalStatus::kSolved && gap <= 1e-3 && dist <= 0.05 && secs < 60.0,
          os.str()};
}

Outcome c4_gda_cycle() {
  const VIProblem p = builtin_vi("f1");
  BaselineMethod m;
  m.kind = BaselineKind::kGDA;
  m.eta = 1e-2;
  m.steps = 200000;
  m.alpha = -1.0;
  m.record_every = 1;
  const Trajectory t = run_baseline(p, m, V2(0.5, 0.5));
  double closest = INFINITY;
  int counted = 0;
  for (const auto& r : t.records) {
    if (r.step > m.steps - 10000 && r.event != event_tag::kFinal) {
      closest = std::min(closest, r.x.norm());
      ++counted;
    }
  }
  return {counted == 10000 && closest >= 0.05,
          std::to_string(counted) + " tail iterates, closest approach " + fmt("%.4g", closest)};
}

Outcome c5_dichotomy() {
  const VIProblem p = builtin_vi("f2");
  BaselineMethod gda;
  gda.kind = BaselineKind::kGDA;
  gda.steps = 200000;
  gda.alpha = -1.0;
  gda.record_every = 1000;
  const Trajectory tg = run_baseline(p, gda, V2(-0.9, -0.9));
  const Vector xg = tg.records.back().x;
  const double to_face = (1.0 - xg.cwiseAbs().array()).minCoeff();

  BaselineMethod eg;
  eg.kind = BaselineKind::kEG;
  eg.steps = 200000;
  eg.alpha = 1e-9;
  eg.record_every = 1000;
  const Trajectory te = run_baseline(p, eg, V2(0.05, 0.05));
  const double dist = te.records.back().x.norm();
  std::ostringstream os;
  os << "GDA distance to boundary " << to_face << ", EG distance to origin " << dist;
  return {to_face <= 0.05 && dist <= 1e-3, os.str()};
}

// Null vector of an m x (m+1) matrix by signed maximal minors, oriented by
// the bordered determinant. Only used for m <= 2.
double det_small(const Matrix& m) {
  if (m.rows() == 1) return m(0, 0);
  if (m.rows() == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

Vector minor_null(const Matrix& b) {
  const int k = static_cast<int>(b.cols());
  Vector u(k);
  if (k == 1) {
    u << 1.0;
    return u;
  }
  for (int c = 0; c < k; ++c) {
    Matrix minor(k - 1, k - 1);
    for (int r = 0; r < k - 1; ++r) {
      for (int l = 0, ll = 0; l < k; ++l) {
        if (l != c) minor(r, ll++) = b(r, l);
      }
    }
    u[c] = ((c % 2) ? -1.0 : 1.0) * det_small(minor);
  }
  return u.normalized();
}

Outcome c6_direction_suite() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  const std::vector<std::string> names = builtin_names();
  int ok = 0, compared = 0, attempted = 0;
  double worst_norm = 0.0, worst_orth = 0.0, worst_angle = 0.0;
  int sign_fail = 0;
  while (ok < 1000) {
    ++attempted;
    // Half the draws use a built-in field, half a random affine field in 3..5
    // dimensions.
    Matrix jac;
    int n;
    if (attempted % 2 == 0) {
      const VIProblem p = builtin_vi(names[rng() % names.size()]);
      n = 2;
      jac = p.evaluate_jacobian(V2(unit(rng), unit(rng)));
    } else {
      n = 3 + static_cast<int>(rng() % 3);
      jac.resize(n, n);
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) jac(r, c) = g(rng);
      }
    }
    const int i = 1 + static_cast<int>(rng() % (n - 1));
    CoordinateSet s;
    for (int j = 0; j < i; ++j) {
      if (rng() % 2) s.insert(j);
    }
    const EpochState e{i, s};
    const Matrix b = restricted_matrix(jac, e);
    if (s.size() > 0) {
      Eigen::JacobiSVD<Matrix> svd(b);
      if (svd.singularValues().minCoeff() <= 1e-6 * std::max(1.0, svd.singularValues().maxCoeff())) {
        continue;  // not full rank
      }
    }
    Direction dir;
    try {
      dir = compute_direction(jac, e);
    } catch (const RidgeError&) {
      continue;
    }
    ++ok;
    worst_norm = std::max(worst_norm, std::abs(dir.d.norm() - 1.0));
    for (int j : s.to_vector()) {
      worst_orth = std::max(worst_orth, std::abs(jac.row(j).dot(dir.d)) / jac.row(j).norm());
    }
    // Sign of the bordered determinant, recomputed here.
    std::vector<int> cols = s.to_vector();
    cols.push_back(i);
    const int m = s.size();
    Matrix border(m + 1, m + 1);
    for (int k = 0; k <= m; ++k) {
      for (int l = 0; l < m; ++l) border(k, l) = jac(cols[l], cols[k]);
      border(k, m) = dir.d[cols[k]];
    }
    const double want = (m % 2 == 0) ? 1.0 : -1.0;
    if (!(border.determinant() * want > 0.0)) ++sign_fail;
    for (int j = 0; j < n; ++j) {
      if (!dir.support.contains(j) && dir.d[j] != 0.0) ++sign_fail;
    }
    if (m + 1 <= 3) {
      Vector u = minor_null(b);
      Matrix ob = border;
      for (int k = 0; k <= m; ++k) ob(k, m) = u[k];
      if (det_small(ob) * want < 0) u = -u;
      Vector sub(m + 1);
      for (int k = 0; k <= m; ++k) sub[k] = dir.d[cols[k]];
      worst_angle = std::max(worst_angle, std::acos(std::clamp(sub.dot(u), -1.0, 1.0)));
      ++compared;
    }
  }
  std::ostringstream os;
  os << ok << " configurations, " << compared << " oracle comparisons; norm err " << worst_norm
     << ", orthogonality " << worst_orth << ", sign failures " << sign_fail << ", max angle "
     << worst_angle;
  return {worst_norm <= 1e-9 && worst_orth <= 1e-8 && sign_fail == 0 && worst_angle <= 1e-3,
          os.str()};
}

Outcome c7_derivatives() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> interior(0.01, 0.99);
  double worst = 0.0;
  int points = 0;
  for (const std::string& name : builtin_names()) {
    const VIProblem p = builtin_vi(name);
    for (int k = 0; k < 100; ++k) {
      const Vector x = V2(interior(rng), interior(rng));
      const Matrix an = p.evaluate_jacobian(x);
      const Matrix fd = finite_diff_jacobian(p, x, 1e-6);
      worst = std::max(worst, (an - fd).norm() / std::max(1.0, an.norm()));
      ++points;
    }
  }
  return {worst <= 1e-5, std::to_string(points) + " points, worst relative error " + fmt("%.3g", worst)};
}

Outcome c8_gap_equivalence() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Tolerances tol;
  int mismatches = 0, satisfied = 0, total = 0;
  for (const std::string& name : builtin_names()) {
    const VIProblem p = builtin_vi(name);
    const int n = p.dimension();
    for (int k = 0; k < 1000; ++k) {
      Vector x(n);
      for (int j = 0; j < n; ++j) {
        // A third of the coordinates land on a face so satisfied points occur.
        const double r = unit(rng);
        x[j] = r < 1.0 / 6 ? 0.0 : r < 1.0 / 3 ? 1.0 : unit(rng);
      }
      // Known equilibria and the neg_square diagonal.
      if (k % 10 == 0) x = V2(0.5, 0.5);
      if (k % 10 == 1 && name == "neg_square") x = V2(x[0], x[0]);
      const auto cls = classify_all(p, x, tol);
      const bool all = std::all_of(cls.begin(), cls.end(), [](const CoordinateStatus& c) { return c.satisfied(); });
      const bool small = vi_gap(p, x) <= n * tol.zero_tol;
      if (all != small) ++mismatches;
      satisfied += all;
      ++total;
    }
  }
  return {mismatches == 0, std::to_string(total) + " points, " + std::to_string(satisfied) +
                               " satisfied, " + std::to_string(mismatches) + " mismatches"};
}

Outcome c9_parity() {
  bool pass = true;
  std::ostringstream os;
  for (const std::string& name : {"bilinear", "f1", "f2"}) {
    const VIProblem p = builtin_vi(name);
    const SolverConfig cfg = golden_config();
    const ParityReport r = parity_diagnostics(p, run_stonr(p, cfg), cfg);
    os << name << ":";
    for (const auto& c : r.checks) {
      os << " " << c.id << (c.passed ? "+" : "-") << c.checked;
      if (!c.passed) {
        pass = false;
        if (!c.witnesses.empty()) os << "(" << c.witnesses.front() << ")";
      }
    }
    os << "; ";
  }
  return {pass, os.str()};
}

Outcome c10_negative() {
  const VIProblem p = builtin_vi("neg_square");
  const Trajectory t = run_stonr(p, golden_config());
  const Vector x = p.domain().to_unit(t.records.back().x);
  const bool interior = (x.array() > 1e-9).all() && (x.array() < 1.0 - 1e-9).all();
  std::ostringstream os;
  os << to_string(t.status) << " at (" << t.records.back().x[0] << ", " << t.records.back().x[1]
     << "), " << (interior ? "interior" : "boundary");
  return {!(t.status == TerminalStatus::kSolved && interior), os.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome c11_determinism() {
  const fs::path root = fs::temp_directory_path() / "ridge_acceptance_determinism";
  fs::remove_all(root);
  bool same = true;
  int files = 0;
  for (const std::string& problem : {"bilinear", "f2"}) {
    for (const std::string& method : {"stonr", "eg", "ftr"}) {
      std::vector<std::string> contents;
      for (int run = 0; run < 2; ++run) {
        const fs::path out = root / std::to_string(run);
        fs::create_directories(out);
        dispatch({"solve", "--problem", problem, "--method", method, "--steps", "3000", "--seed", "11",
                  "--init", "0.3,0.8", "--quiet", "--out", out.string()});
        contents.push_back(slurp(out / (problem + "_" + method + ".csv")));
      }
      same = same && !contents[0].empty() && contents[0] == contents[1];
      ++files;
    }
  }
  fs::remove_all(root);
  return {same, std::to_string(files) + " trajectory files compared byte for byte"};
}

}  // namespace

int main() {
  configure_logging();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"bilinear golden path", c1_bilinear},
      {"f2 convergence", [] { return converge_to_origin("f2"); }},
      {"f1 convergence", [] { return converge_to_origin("f1"); }},
      {"GDA limit cycle on f1", c4_gda_cycle},
      {"GDA/EG dichotomy on f2", c5_dichotomy},
      {"direction property suite", c6_direction_suite},
      {"derivative correctness", c7_derivatives},
      {"gap and satisfaction equivalence", c8_gap_equivalence},
      {"parity diagnostics", c9_parity},
      {"neg_square negative test", c10_negative},
      {"determinism", c11_determinism},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", k + 1,
                criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
