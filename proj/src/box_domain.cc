#include "ridge/box_domain.h"

#include <stdexcept>
#include <string>

namespace ridge {

BoxDomain::BoxDomain(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() == 0 || lower_.size() != upper_.size()) {
    throw std::invalid_argument("BoxDomain: lower and upper must have equal, positive length");
  }
  for (Eigen::Index j = 0; j < lower_.size(); ++j) {
    if (!(lower_[j] < upper_[j])) {
      throw std::invalid_argument("BoxDomain: lower[" + std::to_string(j) +
                                  "] must be strictly below upper");
    }
  }
  scale_ = upper_ - lower_;
}

BoxDomain BoxDomain::unit(int n) { return BoxDomain(Vector::Zero(n), Vector::Ones(n)); }

Vector BoxDomain::to_unit(const Vector& u) const {
  return ((u - lower_).array() / scale_.array()).matrix();
}

Vector BoxDomain::from_unit(const Vector& x) const {
  // Convex-combination form keeps the faces exact.
  return (lower_.array() * (1.0 - x.array()) + upper_.array() * x.array()).matrix();
}

bool BoxDomain::operator==(const BoxDomain& other) const {
  return lower_ == other.lower_ && upper_ == other.upper_;
}

Vector project_unit(const Vector& z) { return z.cwiseMax(0.0).cwiseMin(1.0); }

}  // namespace ridge
