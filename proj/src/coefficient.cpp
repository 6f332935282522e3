#include "curldiv/coefficient.hpp"

#include "curldiv/errors.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace curldiv {

namespace {

void require_spd(const Matrix3& a, const std::string& what) {
  if (!a.allFinite()) throw DataError(what + ": non-finite coefficient");
  if (a != a.transpose()) throw DataError(what + ": coefficient matrix is not symmetric");
  Eigen::LLT<Matrix3> llt(a);
  if (llt.info() != Eigen::Success) throw DataError(what + ": coefficient matrix is not positive definite");
}

Matrix3 smooth_coefficient(const Point3& x) {
  Matrix3 a = (2.0 + std::sin(x.sum())) * Matrix3::Identity();
  a(0, 1) = a(1, 0) = 0.25;
  return a;
}

}  // namespace

CoefficientField CoefficientField::identity() { return {}; }

CoefficientField CoefficientField::scalar(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) throw DataError("scalar coefficient must be positive");
  CoefficientField c;
  c.kind_ = Kind::Constant;
  c.name_ = "scalar";
  c.value_ = value * Matrix3::Identity();
  return c;
}

CoefficientField CoefficientField::constant(const Matrix3& value) {
  require_spd(value, "constant");
  CoefficientField c;
  c.kind_ = Kind::Constant;
  c.name_ = "constant";
  c.value_ = value;
  return c;
}

CoefficientField CoefficientField::per_region(std::map<int, Matrix3> values, Matrix3 fallback) {
  for (const auto& [tag, v] : values) require_spd(v, "region " + std::to_string(tag));
  require_spd(fallback, "default region");
  CoefficientField c;
  c.kind_ = Kind::PerRegion;
  c.name_ = "per-region";
  c.regions_ = std::move(values);
  c.value_ = fallback;
  return c;
}

CoefficientField CoefficientField::analytic(const std::string& name) {
  if (name != "smooth") throw DataError("unknown analytic coefficient '" + name + "'");
  return custom(name, smooth_coefficient);
}

CoefficientField CoefficientField::custom(std::string name, std::function<Matrix3(const Point3&)> fn) {
  CoefficientField c;
  c.kind_ = Kind::Analytic;
  c.name_ = std::move(name);
  c.fn_ = std::move(fn);
  return c;
}

Matrix3 CoefficientField::operator()(int region, const Point3& x) const {
  switch (kind_) {
    case Kind::Identity:
    case Kind::Constant: return factor_ * value_;
    case Kind::PerRegion: {
      auto it = regions_.find(region);
      return factor_ * (it == regions_.end() ? value_ : it->second);
    }
    case Kind::Analytic: return factor_ * fn_(x);
  }
  return value_;
}

CoefficientField CoefficientField::scaled(double factor) const {
  if (!(factor > 0.0)) throw DataError("coefficient scale must be positive");
  CoefficientField c = *this;
  if (c.kind_ == Kind::Identity) {
    c.kind_ = Kind::Constant;
    c.name_ = "scalar";
  }
  c.factor_ *= factor;
  return c;
}

}  // namespace curldiv
