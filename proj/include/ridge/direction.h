#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ridge/box_domain.h"
#include "ridge/vi_problem.h"

namespace ridge {

/// Small set of coordinate indices (0-based, at most 64 coordinates) with
/// ascending iteration. The bitmask is the on-disk encoding.
class CoordinateSet {
 public:
  static constexpr int kMaxCoordinates = 64;

  CoordinateSet() = default;
  explicit CoordinateSet(std::uint64_t mask) : mask_(mask) {}
  CoordinateSet(std::initializer_list<int> coords);

  bool contains(int j) const { return (mask_ >> j) & 1U; }
  void insert(int j) { mask_ |= bit(j); }
  void erase(int j) { mask_ &= ~bit(j); }
  CoordinateSet with(int j) const { return CoordinateSet(mask_ | bit(j)); }
  CoordinateSet without(int j) const { return CoordinateSet(mask_ & ~bit(j)); }

  int size() const;
  bool empty() const { return mask_ == 0; }
  std::uint64_t mask() const { return mask_; }
  std::vector<int> to_vector() const;

  bool operator==(const CoordinateSet&) const = default;

 private:
  static std::uint64_t bit(int j) { return std::uint64_t{1} << j; }
  std::uint64_t mask_ = 0;
};

/// Epoch (i, S): the coordinate under examination and the set held on the
/// ridge {V_S = 0}. Invariant: every member of S is below i.
struct EpochState {
  int i = 0;
  CoordinateSet s;

  bool operator==(const EpochState&) const = default;
};

/// Human-readable "(i, {s1,...})" with 1-based coordinates.
std::string to_string(const EpochState& e);

struct Direction {
  Vector d;                // unit vector, zero outside support
  CoordinateSet support;   // S plus i
  double orientation_det;  // sign equals (-1)^|S|
  std::optional<double> smallest_singular;  // of the restricted matrix; none when S is empty
  double largest_singular = 0.0;
};

struct DirectionOptions {
  /// Relative rank threshold; the absolute threshold is this times
  /// max(1, largest singular value of the restricted matrix).
  double rank_tol = 1e-8;
};

/// Unit vector d supported on S and i with grad V_j . d = 0 for every j in S,
/// oriented so the bordered determinant has sign (-1)^|S|.
/// Throws RidgeError(kRankDeficient / kDegenerateOrientation).
Direction compute_direction(const VIProblem& p, const Vector& x, const EpochState& e,
                            const DirectionOptions& opts = {});

/// Same computation from a precomputed Jacobian.
Direction compute_direction(const Matrix& jacobian, const EpochState& e,
                            const DirectionOptions& opts = {});

/// The m x (m+1) matrix of S-gradients restricted to the support S, i.
Matrix restricted_matrix(const Matrix& jacobian, const EpochState& e);

struct IdealDirection {
  Direction direction;
  CoordinateSet s;           // the set actually used (after pruning)
  std::optional<int> pruned; // coordinate removed by the boundary rule
};

/// Components with magnitude at or below this count as zero in sign tests.
inline constexpr double kDirectionSignFloor = 1e-12;

/// Ideal direction for coordinate i: S = {j < i : |V_j| <= zero_tol}, with the
/// single boundary conflict (if any) pruned from S.
IdealDirection ideal_direction(const VIProblem& p, const Vector& x, int i,
                               const Tolerances& tol = {}, const DirectionOptions& opts = {});

bool is_frozen(const VIProblem& p, const Vector& x, int j, const Tolerances& tol = {},
               const DirectionOptions& opts = {});

/// The admissible pair of a pivot, or nullopt when every coordinate is
/// satisfied. Throws RidgeError(kAllFrozen) if no candidate is unfrozen.
std::optional<EpochState> admissible_pair(const VIProblem& p, const Vector& x,
                                          const Tolerances& tol = {},
                                          const DirectionOptions& opts = {});

}  // namespace ridge
