#pragma once

#include <Eigen/Dense>

namespace ridge {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Axis-aligned box [lower, upper] in problem units. All solver computation
/// happens on the unit box; this class owns the affine map between the two.
class BoxDomain {
 public:
  BoxDomain(Vector lower, Vector upper);

  static BoxDomain unit(int n);

  int dimension() const { return static_cast<int>(lower_.size()); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  /// Per-coordinate width upper - lower.
  const Vector& scale() const { return scale_; }

  /// Problem units -> unit box.
  Vector to_unit(const Vector& u) const;
  /// Unit box -> problem units. Maps 0 to lower and 1 to upper exactly.
  Vector from_unit(const Vector& x) const;

  bool operator==(const BoxDomain& other) const;

 private:
  Vector lower_;
  Vector upper_;
  Vector scale_;
};

/// Euclidean projection onto the unit box.
Vector project_unit(const Vector& z);

}  // namespace ridge
