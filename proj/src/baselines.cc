#include "ridge/baselines.h"

#include <stdexcept>
#include <vector>

#include "ridge/errors.h"

namespace ridge {

const char* to_string(BaselineKind k) {
  switch (k) {
    case BaselineKind::kGDA: return "gda";
    case BaselineKind::kEG: return "eg";
    case BaselineKind::kOGDA: return "ogda";
    case BaselineKind::kFTR: return "ftr";
  }
  return "unknown";
}

BaselineKind baseline_kind_from_string(const std::string& s) {
  for (auto k : {BaselineKind::kGDA, BaselineKind::kEG, BaselineKind::kOGDA, BaselineKind::kFTR}) {
    if (s == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown baseline method '" + s + "'");
}

void BaselineMethod::validate() const {
  if (!(eta > 0.0)) throw std::invalid_argument("BaselineMethod: eta must be positive");
  if (!(damping >= 0.0)) throw std::invalid_argument("BaselineMethod: damping must be >= 0");
  if (steps < 0) throw std::invalid_argument("BaselineMethod: steps must be >= 0");
  if (record_every < 1) throw std::invalid_argument("BaselineMethod: record_every must be >= 1");
}

namespace {

Vector project(const BoxDomain& d, const Vector& u) {
  return u.cwiseMax(d.lower()).cwiseMin(d.upper());
}

Vector ftr_step(const VIProblem& p, const Vector& u, const BaselineMethod& m) {
  const MinMaxObjective* obj = p.objective();
  if (obj == nullptr || !obj->hessian) {
    throw std::invalid_argument("FtR needs a min-max objective with a Hessian");
  }
  std::vector<int> th;
  std::vector<int> om;
  for (int j = 0; j < obj->dimension(); ++j) {
    (obj->roles[j] == Role::kMinimizing ? th : om).push_back(j);
  }
  const Vector g = obj->gradient(u);
  const Matrix h = obj->hessian(u);

  Vector next = u;
  Vector g_th(th.size());
  for (std::size_t a = 0; a < th.size(); ++a) {
    g_th[a] = g[th[a]];
    next[th[a]] -= m.eta * g[th[a]];
  }
  if (om.empty()) return next;

  const int k = static_cast<int>(om.size());
  Matrix h_ww(k, k);
  Matrix h_wt(k, static_cast<int>(th.size()));
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) h_ww(a, b) = h(om[a], om[b]);
    for (std::size_t b = 0; b < th.size(); ++b) h_wt(a, b) = h(om[a], th[b]);
  }
  h_ww.diagonal().array() += m.damping;
  Eigen::FullPivLU<Matrix> lu(h_ww);
  if (!lu.isInvertible()) {
    throw RidgeError(ErrorKind::kSingularCorrection,
                     "FtR correction: max-block Hessian is singular; use a positive damping");
  }
  const Vector corr = lu.solve(h_wt * g_th);
  for (int a = 0; a < k; ++a) next[om[a]] += m.eta * g[om[a]] + m.eta * corr[a];
  return next;
}

}  // namespace

BaselineState baseline_step(const VIProblem& p, const BaselineState& s, const BaselineMethod& m) {
  const BoxDomain& d = p.domain();
  const Vector v = p.evaluate_v_problem(s.u);
  BaselineState out;
  switch (m.kind) {
    case BaselineKind::kGDA:
      out.u = project(d, s.u + m.eta * v);
      break;
    case BaselineKind::kEG: {
      const Vector mid = project(d, s.u + m.eta * v);
      out.u = project(d, s.u + m.eta * p.evaluate_v_problem(mid));
      break;
    }
    case BaselineKind::kOGDA: {
      const Vector& prev = s.v_prev ? *s.v_prev : v;
      out.u = project(d, s.u + m.eta * (2.0 * v - prev));
      break;
    }
    case BaselineKind::kFTR:
      out.u = project(d, ftr_step(p, s.u, m));
      break;
  }
  out.v_prev = v;
  return out;
}

Trajectory run_baseline(const VIProblem& p, const BaselineMethod& m, const Vector& init) {
  m.validate();
  const BoxDomain& d = p.domain();
  if (init.size() != d.dimension()) {
    throw std::invalid_argument("run_baseline: init has the wrong dimension");
  }
  if ((init.array() < d.lower().array()).any() || (init.array() > d.upper().array()).any()) {
    throw std::invalid_argument("run_baseline: init lies outside the box");
  }
  Trajectory traj;
  traj.domain = d;
  auto add = [&](std::int64_t step, const Vector& u, const char* tag) {
    TrajectoryRecord r;
    r.step = step;
    r.epoch = 0;
    r.i = -1;
    r.event = tag;
    r.x = u;
    r.v = p.evaluate_v_problem(u);
    traj.records.push_back(std::move(r));
  };

  BaselineState s{init, std::nullopt};
  add(0, s.u, event_tag::kStart);
  std::int64_t k = 0;
  while (true) {
    if (m.alpha >= 0.0 && vi_gap(p, d.to_unit(s.u)) <= m.alpha) {
      traj.status = TerminalStatus::kSolved;
      break;
    }
    if (k >= m.steps) {
      traj.status = TerminalStatus::kMaxSteps;
      traj.message = "iteration budget exhausted";
      break;
    }
    s = baseline_step(p, s, m);
    ++k;
    if (k % m.record_every == 0) add(k, s.u, "");
  }
  add(k, s.u, event_tag::kFinal);
  return traj;
}

}  // namespace ridge
