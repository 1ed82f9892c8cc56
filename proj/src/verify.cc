#include "ridge/verify.h"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <Eigen/SVD>

#include "ridge/errors.h"

namespace ridge {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass: return "Pass";
    case CheckStatus::kFail: return "Fail";
    case CheckStatus::kNotApplicable: return "NotApplicable";
  }
  return "Unknown";
}

bool AssumptionReport::all_pass_or_na() const {
  for (auto s : {a1_square, a1_restricted, a2, a3}) {
    if (s == CheckStatus::kFail) return false;
  }
  return true;
}

namespace {

void mark(CheckStatus& status, bool ok) {
  if (!ok) {
    status = CheckStatus::kFail;
  } else if (status == CheckStatus::kNotApplicable) {
    status = CheckStatus::kPass;
  }
}

bool on_face(double xj, double btol) { return xj <= btol || xj >= 1.0 - btol; }

std::string fmt_point(const Vector& x) {
  std::ostringstream os;
  os.precision(9);
  os << "(";
  for (int j = 0; j < x.size(); ++j) os << (j ? ", " : "") << x[j];
  os << ")";
  return os.str();
}

}  // namespace

AssumptionReport check_assumptions(const VIProblem& p, const std::vector<AssumptionSample>& samples,
                                   const AssumptionTolerances& tol) {
  AssumptionReport rep;
  rep.samples = static_cast<int>(samples.size());
  const int n = p.dimension();
  for (const auto& smp : samples) {
    Vector v;
    Matrix jac;
    try {
      if (smp.x.size() != n || smp.i < 0 || smp.i >= n) continue;
      v = p.evaluate_v(smp.x);
      jac = p.evaluate_jacobian(smp.x);
    } catch (const std::exception&) {
      continue;
    }
    const std::vector<int> s = smp.s.to_vector();
    bool on_ridge = true;
    for (int j : s) on_ridge = on_ridge && std::abs(v[j]) <= tol.zero_tol;
    if (!on_ridge) continue;

    const EpochState e{smp.i, smp.s};
    if (!s.empty()) {
      ++rep.a1_checked;
      Matrix square(s.size(), s.size());
      for (std::size_t a = 0; a < s.size(); ++a) {
        for (std::size_t b = 0; b < s.size(); ++b) square(a, b) = jac(s[a], s[b]);
      }
      const Vector sq = Eigen::JacobiSVD<Matrix>(square).singularValues();
      const double sq_min = sq[sq.size() - 1];
      mark(rep.a1_square, sq_min > tol.sigma_tol);
      if (sq_min <= tol.sigma_tol) {
        rep.witnesses.push_back({"A1-square", smp, sq_min, "square block is singular"});
      }
      const Vector rs = Eigen::JacobiSVD<Matrix>(restricted_matrix(jac, e)).singularValues();
      const double r_min = rs[rs.size() - 1];
      mark(rep.a1_restricted, r_min > tol.sigma_tol);
      if (r_min <= tol.sigma_tol) {
        rep.witnesses.push_back({"A1-restricted", smp, r_min, "restricted matrix loses rank"});
      }
      rep.sigma_min = rep.sigma_min ? std::min(*rep.sigma_min, r_min) : r_min;
      rep.sigma_max = rep.sigma_max ? std::max(*rep.sigma_max, rs[0]) : rs[0];
    }

    bool pinned = true;
    for (int j = 0; j < n; ++j) {
      if (j == smp.i || smp.s.contains(j)) continue;
      pinned = pinned && on_face(smp.x[j], tol.boundary_tol);
    }
    if (!pinned) continue;

    CoordinateSet moving = smp.s.with(smp.i);
    std::vector<int> faces;
    for (int j : moving.to_vector()) {
      if (on_face(smp.x[j], tol.boundary_tol)) faces.push_back(j);
    }
    ++rep.a2_checked;
    mark(rep.a2, faces.size() <= 1);
    if (faces.size() > 1) {
      rep.witnesses.push_back({"A2", smp, static_cast<double>(faces.size()),
                               "several moving coordinates on a face"});
    }

    if (faces.empty()) continue;
    Direction dir;
    try {
      dir = compute_direction(jac, e, DirectionOptions{tol.sigma_tol});
    } catch (const RidgeError& err) {
      // No one-dimensional null space, so A3 has nothing to say here.
      continue;
    }
    ++rep.a3_checked;
    for (int j : faces) {
      const double dj = std::abs(dir.d[j]);
      mark(rep.a3, dj > tol.direction_tol);
      if (dj <= tol.direction_tol) {
        rep.witnesses.push_back(
            {"A3", smp, dj, "direction vanishes at face coordinate " + std::to_string(j + 1)});
      }
    }
  }
  return rep;
}

std::vector<AssumptionSample> samples_from_trajectory(const Trajectory& traj) {
  std::vector<AssumptionSample> out;
  for (const auto& r : traj.records) {
    if (r.event.empty() || r.event == event_tag::kFinal || r.i < 0) continue;
    out.push_back({traj.domain.to_unit(r.x), CoordinateSet(r.s_mask), r.i});
  }
  return out;
}

PivotCheck detect_pivot(const VIProblem& p, const Vector& x, const Tolerances& tol) {
  PivotCheck pc;
  pc.x = x;
  const std::vector<CoordinateStatus> st = classify_all(p, x, tol);
  const int n = p.dimension();
  for (int j = 0; j < n; ++j) {
    if (!st[j].satisfied()) {
      pc.ell = j;
      break;
    }
  }
  if (!pc.ell) {
    pc.is_pivot = true;
    return pc;
  }
  const int ell = *pc.ell;
  for (int j = 0; j < ell; ++j) {
    if (st[j].kind == Satisfaction::kZeroSatisfied) pc.m.insert(j);
  }

  for (int j = 0; j < n; ++j) {
    if (!st[j].satisfied() && !(st[j].value > 0.0)) {
      pc.failing_bullets.push_back(1);
      break;
    }
  }
  for (int j = ell + 1; j < n; ++j) {
    if (!at_lower(x[j], tol)) {
      pc.failing_bullets.push_back(2);
      break;
    }
  }
  bool face = at_lower(x[ell], tol) || at_upper(x[ell], tol);
  for (int j : pc.m.to_vector()) face = face || at_lower(x[j], tol) || at_upper(x[j], tol);
  if (!face) pc.failing_bullets.push_back(3);
  if (!pc.failing_bullets.empty()) {
    pc.failing_bullet = pc.failing_bullets.front();
    return pc;
  }
  pc.is_pivot = true;
  return pc;
}

bool ParityReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

const ParityCheck& ParityReport::check(const std::string& id) const {
  for (const auto& c : checks) {
    if (c.id == id) return c;
  }
  throw std::out_of_range("no parity check '" + id + "'");
}

namespace {

struct Node {
  std::size_t row;
  Vector x;  // unit box
  EpochState e;
  bool is_start;
};

void fail(ParityCheck& c, std::string what) {
  c.passed = false;
  c.witnesses.push_back(std::move(what));
}

}  // namespace

ParityReport parity_diagnostics(const VIProblem& p, const Trajectory& traj,
                                const SolverConfig& cfg) {
  ParityReport rep;
  ParityCheck a;
  a.id = "a";
  a.name = "pivot at every epoch start";
  ParityCheck b;
  b.id = "b";
  b.name = "epoch starts do not repeat";
  ParityCheck c;
  c.id = "c";
  c.name = "backward run returns to the predecessor";
  ParityCheck d;
  d.id = "d";
  d.name = "origin has in-degree zero";
  ParityCheck e;
  e.id = "e";
  e.name = "admissible pair agrees with the maintained epoch";

  const Tolerances tol{cfg.epsilon, cfg.boundary_tol};
  std::vector<Node> nodes;
  for (std::size_t r = 0; r < traj.records.size(); ++r) {
    const auto& rec = traj.records[r];
    if (rec.event == event_tag::kStart) {
      nodes.push_back({r, traj.domain.to_unit(rec.x), {rec.i, CoordinateSet(rec.s_mask)}, true});
    }
  }
  if (!traj.records.empty() && (nodes.empty() || nodes.back().row + 1 != traj.records.size())) {
    const auto& last = traj.records.back();
    nodes.push_back({traj.records.size() - 1, traj.domain.to_unit(last.x),
                     {last.i, CoordinateSet(last.s_mask)}, false});
  }

  for (const auto& nd : nodes) {
    ++a.checked;
    const PivotCheck pc = detect_pivot(p, nd.x, tol);
    if (!pc.is_pivot) {
      fail(a, "row " + std::to_string(nd.row) + " at " + fmt_point(nd.x) + " fails bullet " +
                  std::to_string(pc.failing_bullet));
    }
  }

  std::set<std::tuple<int, std::uint64_t, std::vector<long long>>> seen;
  for (const auto& nd : nodes) {
    if (!nd.is_start) continue;
    ++b.checked;
    std::vector<long long> key(nd.x.size());
    for (int j = 0; j < nd.x.size(); ++j) key[j] = std::llround(nd.x[j] * 1e6);
    if (!seen.insert({nd.e.i, nd.e.s.mask(), key}).second) {
      fail(b, "epoch " + to_string(nd.e) + " starts twice at " + fmt_point(nd.x));
    }
  }

  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const Node& from = nodes[k];
    const Node& to = nodes[k + 1];
    if (!from.is_start) continue;
    const std::int64_t steps = traj.records[to.row].step - traj.records[from.row].step;
    if (steps <= 0) continue;

    ++c.checked;
    SolverConfig back = cfg;
    back.max_steps_per_epoch = 2 * steps + 100;
    back.record_every = back.max_steps_per_epoch;
    const Trajectory bt = run_backward(p, to.x, from.e, back);
    const Vector landing = traj.domain.to_unit(bt.records.back().x);
    const double dist = (landing - from.x).norm();
    if (bt.status != TerminalStatus::kSolved || dist > 5.0 * cfg.gamma) {
      fail(c, "backward " + to_string(from.e) + " from row " + std::to_string(to.row) +
                  " lands at " + fmt_point(landing) + ", " + std::to_string(dist) +
                  " from the predecessor (" + to_string(bt.status) + ")");
    }

    ++e.checked;
    try {
      const auto pair = admissible_pair(p, from.x, tol, cfg.direction);
      if (!pair || !(*pair == from.e)) {
        fail(e, "row " + std::to_string(from.row) + ": maintained " + to_string(from.e) +
                    ", recomputed " + (pair ? to_string(*pair) : std::string("none")));
      }
    } catch (const RidgeError& err) {
      fail(e, "row " + std::to_string(from.row) + ": " + err.what());
    }
  }

  {
    ++d.checked;
    SolverConfig back = cfg;
    back.max_steps_per_epoch = 1;
    const Trajectory bt = run_backward(p, Vector::Zero(p.dimension()), EpochState{0, {}}, back);
    const auto& last = bt.records.back();
    if (bt.status != TerminalStatus::kSolved || last.event.rfind("bad:", 0) != 0 || last.step > 1) {
      fail(d, "backward from the origin ended with '" + last.event + "' after " +
                  std::to_string(last.step) + " steps");
    }
  }

  rep.checks = {a, b, c, d, e};
  return rep;
}

}  // namespace ridge
