#include "ridge/direction.h"

#include <bit>
#include <cmath>
#include <sstream>

#include "ridge/errors.h"

namespace ridge {

CoordinateSet::CoordinateSet(std::initializer_list<int> coords) {
  for (int j : coords) insert(j);
}

int CoordinateSet::size() const { return std::popcount(mask_); }

std::vector<int> CoordinateSet::to_vector() const {
  std::vector<int> out;
  for (std::uint64_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

std::string to_string(const EpochState& e) {
  std::ostringstream os;
  os << "(" << e.i + 1 << ", {";
  bool first = true;
  for (int j : e.s.to_vector()) {
    os << (first ? "" : ",") << j + 1;
    first = false;
  }
  os << "})";
  return os.str();
}

namespace {

std::vector<int> support_order(const EpochState& e) {
  std::vector<int> cols = e.s.to_vector();
  cols.push_back(e.i);
  return cols;
}

}  // namespace

Matrix restricted_matrix(const Matrix& jacobian, const EpochState& e) {
  const std::vector<int> rows = e.s.to_vector();
  const std::vector<int> cols = support_order(e);
  Matrix b(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) b(r, c) = jacobian(rows[r], cols[c]);
  }
  return b;
}

Direction compute_direction(const Matrix& jacobian, const EpochState& e,
                            const DirectionOptions& opts) {
  const int n = static_cast<int>(jacobian.rows());
  if (e.i < 0 || e.i >= n) throw std::invalid_argument("compute_direction: i out of range");
  if (e.s.mask() >> e.i != 0) {
    throw std::invalid_argument("compute_direction: S must lie below i in " + to_string(e));
  }

  Direction out;
  out.support = e.s.with(e.i);
  out.d = Vector::Zero(n);
  const int m = e.s.size();
  if (m == 0) {
    out.d[e.i] = 1.0;
    out.orientation_det = 1.0;
    return out;
  }

  const Matrix b = restricted_matrix(jacobian, e);
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullV);
  const Vector& sigma = svd.singularValues();
  out.largest_singular = sigma[0];
  out.smallest_singular = sigma[m - 1];
  const double threshold = opts.rank_tol * std::max(1.0, sigma[0]);
  if (!(sigma[m - 1] > threshold)) {
    std::ostringstream os;
    os << "restricted Jacobian for epoch " << to_string(e) << " has sigma_min "
       << sigma[m - 1] << " <= " << threshold;
    throw RidgeError(ErrorKind::kRankDeficient, os.str());
  }
  Vector null = svd.matrixV().col(m);

  // Bordered matrix: column l < m is grad V_{s_l} over the support rows, the
  // last column is the candidate direction.
  const std::vector<int> cols = support_order(e);
  const std::vector<int> s = e.s.to_vector();
  Matrix border(m + 1, m + 1);
  for (int k = 0; k <= m; ++k) {
    for (int l = 0; l < m; ++l) border(k, l) = jacobian(s[l], cols[k]);
    border(k, m) = null[k];
  }
  double det = border.fullPivLu().determinant();
  const double hadamard = border.colwise().norm().prod();
  if (!(std::abs(det) > opts.rank_tol * hadamard)) {
    throw RidgeError(ErrorKind::kDegenerateOrientation,
                     "bordered determinant vanished for epoch " + to_string(e));
  }
  const double wanted = (m % 2 == 0) ? 1.0 : -1.0;
  if (det * wanted < 0.0) {
    null = -null;
    det = -det;
  }
  for (int k = 0; k <= m; ++k) out.d[cols[k]] = null[k];
  out.orientation_det = det;
  return out;
}

Direction compute_direction(const VIProblem& p, const Vector& x, const EpochState& e,
                            const DirectionOptions& opts) {
  return compute_direction(p.evaluate_jacobian(x), e, opts);
}

namespace {

bool conflicts_with_face(double xj, double dj, const Tolerances& tol) {
  return (at_lower(xj, tol) && dj < -kDirectionSignFloor) ||
         (at_upper(xj, tol) && dj > kDirectionSignFloor);
}

}  // namespace

IdealDirection ideal_direction(const VIProblem& p, const Vector& x, int i,
                               const Tolerances& tol, const DirectionOptions& opts) {
  const Vector v = p.evaluate_v(x);
  const Matrix jac = p.evaluate_jacobian(x);
  CoordinateSet s;
  for (int j = 0; j < i; ++j) {
    if (std::abs(v[j]) <= tol.zero_tol) s.insert(j);
  }
  IdealDirection out{compute_direction(jac, EpochState{i, s}, opts), s, std::nullopt};

  std::vector<int> conflicts;
  for (int j : s.to_vector()) {
    if (conflicts_with_face(x[j], out.direction.d[j], tol)) conflicts.push_back(j);
  }
  if (conflicts.size() > 1) {
    std::ostringstream os;
    os << "coordinates";
    for (int j : conflicts) os << " " << j + 1;
    os << " all point out of the box for coordinate " << i + 1;
    throw RidgeError(ErrorKind::kMultipleBoundaryConflicts, os.str());
  }
  if (conflicts.size() == 1) {
    out.s = s.without(conflicts.front());
    out.pruned = conflicts.front();
    out.direction = compute_direction(jac, EpochState{i, out.s}, opts);
  }
  return out;
}

bool is_frozen(const VIProblem& p, const Vector& x, int j, const Tolerances& tol,
               const DirectionOptions& opts) {
  const IdealDirection ideal = ideal_direction(p, x, j, tol, opts);
  return conflicts_with_face(x[j], ideal.direction.d[j], tol);
}

std::optional<EpochState> admissible_pair(const VIProblem& p, const Vector& x,
                                          const Tolerances& tol, const DirectionOptions& opts) {
  const std::vector<CoordinateStatus> status = classify_all(p, x, tol);
  int ell = -1;
  for (std::size_t j = 0; j < status.size(); ++j) {
    if (!status[j].satisfied()) {
      ell = static_cast<int>(j);
      break;
    }
  }
  if (ell < 0) return std::nullopt;
  for (int j = ell; j >= 0; --j) {
    const IdealDirection ideal = ideal_direction(p, x, j, tol, opts);
    if (!conflicts_with_face(x[j], ideal.direction.d[j], tol)) {
      return EpochState{j, ideal.s};
    }
  }
  throw RidgeError(ErrorKind::kAllFrozen,
                   "every coordinate up to " + std::to_string(ell + 1) + " is frozen");
}

}  // namespace ridge
