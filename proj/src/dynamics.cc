#include "ridge/dynamics.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

#include <spdlog/spdlog.h>

#include "ridge/errors.h"

namespace ridge {

const char* to_string(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::kSolved: return "Solved";
    case TerminalStatus::kMaxEpochs: return "MaxEpochs";
    case TerminalStatus::kMaxSteps: return "MaxSteps";
    case TerminalStatus::kAssumptionViolation: return "AssumptionViolation";
  }
  return "Unknown";
}

TerminalStatus terminal_status_from_string(const std::string& s) {
  for (auto st : {TerminalStatus::kSolved, TerminalStatus::kMaxEpochs, TerminalStatus::kMaxSteps,
                  TerminalStatus::kAssumptionViolation}) {
    if (s == to_string(st)) return st;
  }
  throw std::invalid_argument("unknown terminal status '" + s + "'");
}

const char* to_string(ExitKind k) {
  switch (k) {
    case ExitKind::kGood: return "good";
    case ExitKind::kBad: return "bad";
    case ExitKind::kMiddling: return "middling";
  }
  return "unknown";
}

std::string ExitEvent::tag() const {
  if (kind == ExitKind::kGood) {
    return zero_satisfied ? event_tag::kGoodZero : event_tag::kGoodBoundary;
  }
  return std::string(to_string(kind)) + ":" + std::to_string(coordinate + 1);
}

void SolverConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("SolverConfig: ") + what);
  };
  require(gamma > 0.0, "gamma must be positive");
  require(epsilon > 0.0, "epsilon must be positive");
  require(alpha > 0.0, "alpha must be positive");
  require(correction_tol > 0.0 && correction_tol < epsilon,
          "correction_tol must lie in (0, epsilon)");
  require(max_epochs > 0, "max_epochs must be positive");
  require(max_steps_per_epoch >= 0, "max_steps_per_epoch must be non-negative");
  require(record_every >= 1, "record_every must be at least 1");
  require(boundary_tol >= 0.0, "boundary_tol must be non-negative");
}

std::int64_t SolverConfig::step_budget() const {
  if (max_steps_per_epoch > 0) return max_steps_per_epoch;
  return static_cast<std::int64_t>(std::min(1e7 / gamma, 1e8));
}

namespace {

double max_abs_on(const Vector& v, const std::vector<int>& rows) {
  double r = 0.0;
  for (int j : rows) r = std::max(r, std::abs(v[j]));
  return r;
}

// Newton pull-back of V_rows onto zero moving only `cols`.
Vector correct_onto_ridge(const VIProblem& p, const Vector& z, const std::vector<int>& rows,
                          const std::vector<int>& cols, double tol, double max_motion) {
  if (rows.empty()) return z;
  Vector current = z;
  double residual = max_abs_on(p.evaluate_v(current), rows);
  const double initial = residual;
  for (int iter = 0; iter < 5 && residual > tol; ++iter) {
    const Vector v = p.evaluate_v(current);
    const Matrix jac = p.evaluate_jacobian(current);
    Matrix b(rows.size(), cols.size());
    Vector r(rows.size());
    for (std::size_t a = 0; a < rows.size(); ++a) {
      r[a] = v[rows[a]];
      for (std::size_t c = 0; c < cols.size(); ++c) b(a, c) = jac(rows[a], cols[c]);
    }
    // Minimum-norm solution lies in the row space of b.
    const Vector delta = b.completeOrthogonalDecomposition().solve(-r);

    Vector candidate;
    double candidate_residual = residual;
    double t = 1.0;
    for (int damp = 0; damp < 6; ++damp, t *= 0.5) {
      candidate = current;
      for (std::size_t c = 0; c < cols.size(); ++c) candidate[cols[c]] += t * delta[c];
      const double moved = (candidate - z).norm();
      if (moved > max_motion) candidate = z + (candidate - z) * (max_motion / moved);
      candidate_residual = max_abs_on(p.evaluate_v(candidate), rows);
      if (candidate_residual < residual) break;
    }
    if (candidate_residual >= residual) {
      if (residual > initial) {
        throw RidgeError(ErrorKind::kCorrectionDiverged, "ridge residual grew during correction");
      }
      break;
    }
    current = candidate;
    residual = candidate_residual;
    if ((current - z).norm() >= max_motion) break;
  }
  if (residual > initial) {
    throw RidgeError(ErrorKind::kCorrectionDiverged, "ridge residual grew during correction");
  }
  return current;
}

std::vector<int> support_of(const EpochState& e, int n) {
  std::vector<int> cols = e.s.to_vector();
  if (e.i < n) cols.push_back(e.i);
  return cols;
}

Vector advance(const VIProblem& p, const Vector& z, const EpochState& e,
               const SolverConfig& cfg, double orientation) {
  const Direction dir = compute_direction(p, z, e, cfg.direction);
  Vector next = z + (orientation * cfg.gamma) * dir.d;
  if (cfg.ridge_correction && !e.s.empty()) next = ridge_correction(p, next, e, cfg);
  return next;
}

// Root of V_j along a -> b by bisection, returning the end of the final
// bracket on a's side of the sign change.
Vector bisect_on_segment(const VIProblem& p, const Vector& a, const Vector& b, int j) {
  double lo = 0.0;
  double hi = 1.0;
  const double sign_a = p.evaluate_v(a)[j] >= 0.0 ? 1.0 : -1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double vm = p.evaluate_v(a + mid * (b - a))[j];
    if (vm * sign_a > 0.0) {
      lo = mid;
    } else if (vm == 0.0) {
      lo = hi = mid;
      break;
    } else {
      hi = mid;
    }
  }
  return a + lo * (b - a);
}

}  // namespace

Vector ridge_correction(const VIProblem& p, const Vector& z, const EpochState& e,
                        const SolverConfig& cfg) {
  if (e.s.empty()) return z;
  return correct_onto_ridge(p, z, e.s.to_vector(), support_of(e, p.dimension()),
                            cfg.correction_tol, cfg.gamma);
}

Vector euler_step(const VIProblem& p, const Vector& z, const EpochState& e,
                  const SolverConfig& cfg) {
  return advance(p, z, e, cfg, 1.0);
}

bool good_condition(const Vector& v, const Vector& x, int i, const SolverConfig& cfg) {
  const Tolerances tol = cfg.exit_tolerances();
  return std::abs(v[i]) <= cfg.epsilon || (at_lower(x[i], tol) && v[i] < cfg.epsilon) ||
         (at_upper(x[i], tol) && v[i] > -cfg.epsilon);
}

std::optional<ExitEvent> detect_exit(const VIProblem& p, const Vector& x, const EpochState& e,
                                     const SolverConfig& cfg, const ExitCheckOptions& opts) {
  const Tolerances tol = cfg.exit_tolerances();
  const Vector v = p.evaluate_v(x);

  if (opts.good_armed && good_condition(v, x, e.i, cfg)) {
    ExitEvent ev{ExitKind::kGood, e.i, std::abs(v[e.i]) <= cfg.epsilon, x, {}};
    return ev;
  }

  const Direction dir = compute_direction(p, x, e, cfg.direction);
  const Vector d = opts.orientation * dir.d;

  std::vector<int> bad;
  for (int j : dir.support.to_vector()) {
    if ((d[j] > 0.0 && at_upper(x[j], tol)) || (d[j] < 0.0 && at_lower(x[j], tol))) {
      bad.push_back(j);
    }
  }
  if (!bad.empty()) {
    ExitEvent ev{ExitKind::kBad, bad.front(), false, x, {}};
    if (bad.size() > 1) {
      ev.warnings.push_back("MultipleBadCoordinates: " + std::to_string(bad.size()) +
                            " coordinates leave the box; using " +
                            std::to_string(bad.front() + 1));
    }
    return ev;
  }

  const Vector lookahead = x + cfg.gamma * d;
  const Vector v_ahead = p.evaluate_v(lookahead);
  std::vector<int> middling;
  for (int j = 0; j < e.i; ++j) {
    if (e.s.contains(j)) continue;
    if ((v_ahead[j] > 0.0 && at_lower(x[j], tol)) || (v_ahead[j] < 0.0 && at_upper(x[j], tol))) {
      middling.push_back(j);
    }
  }
  if (!middling.empty()) {
    ExitEvent ev{ExitKind::kMiddling, middling.front(), false, x, {}};
    if (middling.size() > 1) {
      ev.warnings.push_back("MultipleMiddlingCoordinates: " + std::to_string(middling.size()) +
                            " boundary coordinates turn; using " +
                            std::to_string(middling.front() + 1));
    }
    return ev;
  }
  return std::nullopt;
}

EpochState epoch_transition(const EpochState& e, const ExitEvent& ev) {
  switch (ev.kind) {
    case ExitKind::kGood:
      return EpochState{e.i + 1, ev.zero_satisfied ? e.s.with(e.i) : e.s};
    case ExitKind::kBad:
      if (ev.coordinate == e.i) {
        if (e.i == 0) {
          throw RidgeError(ErrorKind::kAssumptionViolation,
                           "bad exit in coordinate 1 would leave the box from epoch " +
                               to_string(e));
        }
        return EpochState{e.i - 1, e.s.without(e.i - 1)};
      }
      return EpochState{e.i, e.s.without(ev.coordinate)};
    case ExitKind::kMiddling:
      return EpochState{e.i, e.s.with(ev.coordinate)};
  }
  throw std::logic_error("epoch_transition: unknown exit kind");
}

namespace {

class Recorder {
 public:
  Recorder(const VIProblem& p, Trajectory& traj) : p_(p), traj_(traj) {}

  void add(std::int64_t step, std::int64_t epoch, const EpochState& e, const Vector& x,
           std::string tag) {
    TrajectoryRecord rec;
    rec.step = step;
    rec.epoch = epoch;
    rec.i = e.i;
    rec.s_mask = e.s.mask();
    rec.event = std::move(tag);
    rec.x = p_.domain().from_unit(x);
    rec.v = (p_.evaluate_v(x).array() / p_.domain().scale().array()).matrix();
    traj_.records.push_back(std::move(rec));
  }

 private:
  const VIProblem& p_;
  Trajectory& traj_;
};

using StartKey = std::pair<std::pair<int, std::uint64_t>, std::vector<double>>;

StartKey start_key(const EpochState& e, const Vector& x) {
  return {{e.i, e.s.mask()}, std::vector<double>(x.data(), x.data() + x.size())};
}

void log_warnings(const ExitEvent& ev) {
  for (const auto& w : ev.warnings) spdlog::warn("{}", w);
}

}  // namespace

Trajectory run_stonr(const VIProblem& p, const SolverConfig& cfg) {
  cfg.validate();
  const int n = p.dimension();
  if (n > CoordinateSet::kMaxCoordinates) {
    throw std::invalid_argument("run_stonr: at most 64 coordinates are supported");
  }
  Trajectory traj;
  traj.domain = p.domain();
  Recorder rec(p, traj);

  Vector x = Vector::Zero(n);
  EpochState e{0, {}};
  std::int64_t epoch = 0;
  std::int64_t step = 0;
  bool entered_via_bad_i = false;
  std::set<StartKey> seen;
  const std::int64_t budget = cfg.step_budget();

  auto finish = [&](TerminalStatus status, std::string message) {
    traj.status = status;
    traj.message = std::move(message);
    rec.add(step, epoch, e, x, event_tag::kFinal);
    return traj;
  };

  try {
    while (true) {
      if (vi_gap(p, x) <= cfg.alpha) return finish(TerminalStatus::kSolved, "");

      if (e.i >= n) {
        // Every coordinate was handled but the residuals on S still leave a
        // gap above alpha: pull the point back onto {V_S = 0}.
        const std::vector<int> s = e.s.to_vector();
        const Vector polished =
            project_unit(correct_onto_ridge(p, x, s, s, cfg.correction_tol, cfg.gamma));
        if (vi_gap(p, polished) <= cfg.alpha) {
          x = polished;
          return finish(TerminalStatus::kSolved, "");
        }
        return finish(TerminalStatus::kAssumptionViolation,
                      "all coordinates examined but the gap stays above alpha");
      }
      if (epoch >= cfg.max_epochs) {
        return finish(TerminalStatus::kMaxEpochs, "epoch budget exhausted");
      }
      if (!seen.insert(start_key(e, x)).second) {
        return finish(TerminalStatus::kAssumptionViolation,
                      "epoch " + to_string(e) + " restarted at an identical point");
      }
      rec.add(step, epoch, e, x, event_tag::kStart);
      spdlog::debug("epoch {} {} starts at step {}", epoch, to_string(e), step);

      Vector z = x;
      Vector prev = x;
      double prev_vi = p.evaluate_v(x)[e.i];
      bool armed = !entered_via_bad_i;
      std::int64_t k = 0;
      std::optional<ExitEvent> ev;
      while (true) {
        const Vector xp = project_unit(z);
        const Vector v = p.evaluate_v(xp);
        ev = detect_exit(p, xp, e, cfg, {1.0, armed});
        if (!ev && armed && k > 0 &&
            ((prev_vi > cfg.epsilon && v[e.i] < -cfg.epsilon) ||
             (prev_vi < -cfg.epsilon && v[e.i] > cfg.epsilon))) {
          // V_i jumped across the epsilon band within one step.
          const Vector root = bisect_on_segment(p, prev, xp, e.i);
          const double vi = p.evaluate_v(root)[e.i];
          ev = ExitEvent{ExitKind::kGood, e.i, std::abs(vi) <= cfg.epsilon, root, {}};
        }
        if (ev) break;
        if (!good_condition(v, xp, e.i, cfg)) armed = true;
        if (k >= budget) {
          x = xp;
          return finish(TerminalStatus::kMaxSteps, "step budget exhausted in epoch " + to_string(e));
        }
        prev = xp;
        prev_vi = v[e.i];
        z = euler_step(p, z, e, cfg);
        ++k;
        ++step;
        if (step % cfg.record_every == 0) rec.add(step, epoch, e, project_unit(z), "");
      }
      log_warnings(*ev);

      if (ev->kind == ExitKind::kMiddling) {
        // Place the exit where V_j actually reaches zero between x' and the
        // lookahead point.
        const int j = ev->coordinate;
        const Direction dir = compute_direction(p, ev->point, e, cfg.direction);
        const Vector ahead = ev->point + cfg.gamma * dir.d;
        const Tolerances tol = cfg.exit_tolerances();
        const double vj = p.evaluate_v(ev->point)[j];
        const bool still_satisfied =
            at_lower(ev->point[j], tol) ? vj <= 0.0 : vj >= 0.0;
        if (still_satisfied) ev->point = project_unit(bisect_on_segment(p, ev->point, ahead, j));
      }

      rec.add(step, epoch, e, ev->point, ev->tag());
      spdlog::debug("epoch {} {} exits: {} after {} steps", epoch, to_string(e), ev->tag(), k);
      entered_via_bad_i = ev->kind == ExitKind::kBad && ev->coordinate == e.i;
      x = ev->point;
      e = epoch_transition(e, *ev);
      ++epoch;
    }
  } catch (const RidgeError& err) {
    spdlog::warn("run_stonr on {}: {}", p.name(), err.what());
    return finish(TerminalStatus::kAssumptionViolation, err.what());
  }
}

Trajectory run_backward(const VIProblem& p, const Vector& start, const EpochState& e,
                        const SolverConfig& cfg) {
  cfg.validate();
  Trajectory traj;
  traj.domain = p.domain();
  Recorder rec(p, traj);
  const std::int64_t budget = cfg.step_budget();

  Vector z = start;
  Vector xp = project_unit(z);
  rec.add(0, 0, e, xp, event_tag::kStart);
  bool armed = false;
  std::int64_t k = 0;
  try {
    while (true) {
      xp = project_unit(z);
      const auto ev = detect_exit(p, xp, e, cfg, {-1.0, armed});
      if (ev) {
        rec.add(k, 0, e, ev->point, ev->tag());
        traj.status = TerminalStatus::kSolved;
        return traj;
      }
      if (!good_condition(p.evaluate_v(xp), xp, e.i, cfg)) armed = true;
      if (k >= budget) break;
      z = advance(p, z, e, cfg, -1.0);
      ++k;
      if (k % cfg.record_every == 0) rec.add(k, 0, e, project_unit(z), "");
    }
  } catch (const RidgeError& err) {
    traj.status = TerminalStatus::kAssumptionViolation;
    traj.message = err.what();
    rec.add(k, 0, e, xp, event_tag::kFinal);
    return traj;
  }
  traj.status = TerminalStatus::kMaxSteps;
  traj.message = "backward step budget exhausted";
  rec.add(k, 0, e, xp, event_tag::kFinal);
  return traj;
}

}  // namespace ridge
