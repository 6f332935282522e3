#pragma once

#include "curldiv/mesh.hpp"

#include <functional>
#include <map>
#include <string>

namespace curldiv {

/// Symmetric, uniformly positive definite material matrix (eta or mu).
class CoefficientField {
 public:
  enum class Kind { Identity, Constant, PerRegion, Analytic };

  CoefficientField() = default;

  static CoefficientField identity();
  static CoefficientField scalar(double value);
  /// Throws DataError unless `value` is exactly symmetric and positive definite.
  static CoefficientField constant(const Matrix3& value);
  /// One matrix per region tag; tags missing from the map use `fallback`.
  static CoefficientField per_region(std::map<int, Matrix3> values, Matrix3 fallback);
  /// Built-in smooth coefficient "smooth": (2 + sin(x+y+z)) I plus a constant
  /// 0.25 off-diagonal coupling between x and y.
  static CoefficientField analytic(const std::string& name);
  static CoefficientField custom(std::string name, std::function<Matrix3(const Point3&)> fn);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  /// Same value everywhere (identity or constant).
  bool is_uniform() const { return kind_ == Kind::Identity || kind_ == Kind::Constant; }

  Matrix3 operator()(int region, const Point3& x) const;
  Matrix3 at(const Mesh& m, int t, const Point3& x) const { return (*this)(m.tag(t), x); }

  /// The field multiplied by a positive constant.
  CoefficientField scaled(double factor) const;

 private:
  Kind kind_ = Kind::Identity;
  std::string name_ = "identity";
  Matrix3 value_ = Matrix3::Identity();
  std::map<int, Matrix3> regions_;
  std::function<Matrix3(const Point3&)> fn_;
  double factor_ = 1.0;
};

}  // namespace curldiv
