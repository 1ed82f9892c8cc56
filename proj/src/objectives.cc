#include "ridge/objectives.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace ridge {

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * (3.0 - 2.0 * t);
}

double smooth_step_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 6.0 * t * (1.0 - t);
}

double smooth_step_second_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 6.0 - 12.0 * t;
}

namespace {

const std::vector<Role> kMinMax{Role::kMinimizing, Role::kMaximizing};

BoxDomain symmetric_box() { return BoxDomain(Vector::Constant(2, -1.0), Vector::Constant(2, 1.0)); }

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// f1 = P * E with P = 4t^2 - q^2 - w^4/10, q = w - 3t + t^3/20,
// E = exp(-(t^2 + w^2)/100).
MinMaxObjective make_f1() {
  struct Parts {
    double p, pt, pw, ptt, ptw, pww;
    double e, et, ew, ett, etw, eww;
  };
  auto parts = [](const Vector& u) {
    const double t = u[0];
    const double w = u[1];
    const double q = w - 3.0 * t + t * t * t / 20.0;
    const double qt = -3.0 + 3.0 * t * t / 20.0;
    const double qtt = 0.3 * t;
    Parts s{};
    s.p = 4.0 * t * t - q * q - std::pow(w, 4) / 10.0;
    s.pt = 8.0 * t - 2.0 * q * qt;
    s.pw = -2.0 * q - 0.4 * w * w * w;
    s.ptt = 8.0 - 2.0 * qt * qt - 2.0 * q * qtt;
    s.ptw = -2.0 * qt;
    s.pww = -2.0 - 1.2 * w * w;
    s.e = std::exp(-(t * t + w * w) / 100.0);
    s.et = -t / 50.0 * s.e;
    s.ew = -w / 50.0 * s.e;
    s.ett = (-1.0 / 50.0 + t * t / 2500.0) * s.e;
    s.etw = t * w / 2500.0 * s.e;
    s.eww = (-1.0 / 50.0 + w * w / 2500.0) * s.e;
    return s;
  };
  MinMaxObjective f;
  f.roles = kMinMax;
  f.value = [parts](const Vector& u) { const Parts s = parts(u); return s.p * s.e; };
  f.gradient = [parts](const Vector& u) {
    const Parts s = parts(u);
    return vec2(s.pt * s.e + s.p * s.et, s.pw * s.e + s.p * s.ew);
  };
  f.hessian = [parts](const Vector& u) {
    const Parts s = parts(u);
    const double ftt = s.ptt * s.e + 2.0 * s.pt * s.et + s.p * s.ett;
    const double ftw = s.ptw * s.e + s.pt * s.ew + s.pw * s.et + s.p * s.etw;
    const double fww = s.pww * s.e + 2.0 * s.pw * s.ew + s.p * s.eww;
    return mat2(ftt, ftw, ftw, fww);
  };
  return f;
}

// f2 = -t w - w^2/20 + (1/10) S(r) w^2 with r = (t^2 + w^2)/2.
MinMaxObjective make_f2() {
  MinMaxObjective f;
  f.roles = kMinMax;
  f.value = [](const Vector& u) {
    const double t = u[0];
    const double w = u[1];
    const double r = 0.5 * (t * t + w * w);
    return -t * w - w * w / 20.0 + 0.1 * smooth_step(r) * w * w;
  };
  f.gradient = [](const Vector& u) {
    const double t = u[0];
    const double w = u[1];
    const double r = 0.5 * (t * t + w * w);
    const double s = smooth_step(r);
    const double s1 = smooth_step_derivative(r);
    return vec2(-w + 0.1 * s1 * t * w * w, -t - w / 10.0 + 0.1 * (s1 * w * w * w + 2.0 * s * w));
  };
  f.hessian = [](const Vector& u) {
    const double t = u[0];
    const double w = u[1];
    const double r = 0.5 * (t * t + w * w);
    const double s = smooth_step(r);
    const double s1 = smooth_step_derivative(r);
    const double s2 = smooth_step_second_derivative(r);
    const double w2 = w * w;
    const double ftt = 0.1 * (s2 * t * t * w2 + s1 * w2);
    const double ftw = -1.0 + 0.1 * (s2 * t * w2 * w + 2.0 * s1 * t * w);
    const double fww = -0.1 + 0.1 * (s2 * w2 * w2 + 5.0 * s1 * w2 + 2.0 * s);
    return mat2(ftt, ftw, ftw, fww);
  };
  return f;
}

MinMaxObjective make_bilinear() {
  MinMaxObjective f;
  f.roles = kMinMax;
  f.value = [](const Vector& u) { return (u[0] - 0.5) * (u[1] - 0.5); };
  f.gradient = [](const Vector& u) { return vec2(u[1] - 0.5, u[0] - 0.5); };
  f.hessian = [](const Vector&) { return mat2(0.0, 1.0, 1.0, 0.0); };
  return f;
}

MinMaxObjective make_neg_square() {
  MinMaxObjective f;
  f.roles = kMinMax;
  f.value = [](const Vector& u) { return -(u[0] - u[1]) * (u[0] - u[1]); };
  f.gradient = [](const Vector& u) {
    const double g = 2.0 * (u[0] - u[1]);
    return vec2(-g, g);
  };
  f.hessian = [](const Vector&) { return mat2(-2.0, 2.0, 2.0, -2.0); };
  return f;
}

}  // namespace

VIProblem BuiltinProblem::to_vi() const { return min_max_to_vi(name, objective, domain, constants); }

std::vector<std::string> builtin_names() { return {"f1", "f2", "bilinear", "neg_square"}; }

// Constants are for the unit-box field; sampled on a 201 x 201 grid and
// rounded up. They are reporting metadata only.
BuiltinProblem builtin(const std::string& name) {
  if (name == "f1") {
    return {name, std::make_shared<MinMaxObjective>(make_f1()), symmetric_box(), {54.0, 70.0}};
  }
  if (name == "f2") {
    return {name, std::make_shared<MinMaxObjective>(make_f2()), symmetric_box(), {8.7, 84.0}};
  }
  if (name == "bilinear") {
    return {name, std::make_shared<MinMaxObjective>(make_bilinear()), BoxDomain::unit(2),
            {1.0, 0.0}};
  }
  if (name == "neg_square") {
    return {name, std::make_shared<MinMaxObjective>(make_neg_square()), symmetric_box(),
            {16.0, 0.0}};
  }
  throw std::invalid_argument("unknown builtin problem '" + name + "'");
}

VIProblem builtin_vi(const std::string& name) { return builtin(name).to_vi(); }

PerturbationKind perturbation_kind_from_string(const std::string& s) {
  if (s == "sinusoidal_bias") return PerturbationKind::kSinusoidalBias;
  if (s == "linear_map") return PerturbationKind::kLinearMap;
  if (s == "boundary_shrink") return PerturbationKind::kBoundaryShrink;
  throw std::invalid_argument("unknown perturbation kind '" + s + "'");
}

VIProblem perturb(const VIProblem& p, const PerturbationSpec& spec) {
  if (!(spec.magnitude >= 0.0)) throw std::invalid_argument("perturb: magnitude must be >= 0");
  const int n = p.dimension();
  std::mt19937_64 rng(spec.seed);
  const FieldFn base_v = p.field();
  const JacobianFn base_j = p.jacobian();

  switch (spec.kind) {
    case PerturbationKind::kSinusoidalBias: {
      std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
      Vector psi(n);
      for (int j = 0; j < n; ++j) psi[j] = phase(rng);
      const double a = spec.magnitude;
      FieldFn v = [base_v, psi, a](const Vector& x) -> Vector {
        return base_v(x) + a * (x + psi).array().cos().matrix();
      };
      JacobianFn jac = [base_j, psi, a](const Vector& x) -> Matrix {
        Matrix m = base_j(x);
        m.diagonal() -= a * (x + psi).array().sin().matrix();
        return m;
      };
      return VIProblem(p.name() + "+sinusoidal", p.domain(), v, jac, {});
    }
    case PerturbationKind::kLinearMap: {
      std::uniform_real_distribution<double> entry(-spec.magnitude, spec.magnitude);
      Matrix a(n, n);
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) a(r, c) = spec.magnitude > 0.0 ? entry(rng) : 0.0;
      }
      FieldFn v = [base_v, a](const Vector& x) -> Vector { return base_v(x) + a * x; };
      JacobianFn jac = [base_j, a](const Vector& x) -> Matrix { return base_j(x) + a; };
      return VIProblem(p.name() + "+linear", p.domain(), v, jac, {});
    }
    case PerturbationKind::kBoundaryShrink: {
      if (spec.magnitude >= 0.5) {
        throw std::invalid_argument("perturb: boundary shrink magnitude must be below 1/2");
      }
      std::uniform_real_distribution<double> offset(0.0, spec.magnitude);
      Vector lo(n);
      Vector hi(n);
      for (int j = 0; j < n; ++j) {
        lo[j] = spec.magnitude > 0.0 ? offset(rng) : 0.0;
        hi[j] = 1.0 - (spec.magnitude > 0.0 ? offset(rng) : 0.0);
      }
      const Vector width = hi - lo;
      // y in the new unit box maps to x = lo + width * y in the old one.
      FieldFn v = [base_v, lo, width](const Vector& y) -> Vector {
        return (width.array() * base_v(lo + (width.array() * y.array()).matrix()).array()).matrix();
      };
      JacobianFn jac = [base_j, lo, width](const Vector& y) -> Matrix {
        return width.asDiagonal() * base_j(lo + (width.array() * y.array()).matrix()) *
               width.asDiagonal();
      };
      const BoxDomain& d = p.domain();
      BoxDomain shrunk(d.from_unit(lo), d.from_unit(hi));
      return VIProblem(p.name() + "+shrink", shrunk, v, jac, p.constants(),
                       p.shared_objective());
    }
  }
  throw std::logic_error("perturb: unknown kind");
}

}  // namespace ridge
