#include "sampro/testfuncs.hpp"

#include <cmath>
#include <numbers>

namespace sampro {

std::vector<std::string> test_function_names() {
  return {"vee",  "step", "sign",   "runge",     "expt",
          "gauss", "ramp", "sinpit", "inspace1", "inspace2"};
}

Eigen::VectorXd evaluate_test_function(const std::string& name, const EvalMatrix& eval) {
  const Eigen::VectorXd x = eval.candidates->points.col(0);
  const double lo = x.minCoeff();
  const double hi = x.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;
  // Coordinate rescaled to [-1,1] so the shapes are grid-agnostic.
  const Eigen::ArrayXd t = 2.0 * (x.array() - lo) / span - 1.0;

  if (name == "vee") return t.abs().matrix();
  if (name == "step") return (t >= 0.0).cast<double>().matrix();
  if (name == "sign") return (2.0 * (t >= 0.0).cast<double>() - 1.0).matrix();
  if (name == "runge") return (1.0 / (1.0 + 25.0 * t.square())).matrix();
  if (name == "expt") return t.exp().matrix();
  if (name == "gauss") return (-4.0 * t.square()).exp().matrix();
  if (name == "ramp") return t.max(0.0).matrix();
  if (name == "sinpit") return (std::numbers::pi * t).sin().matrix();
  if (name == "inspace1") {
    if (!eval.is_real()) throw InvalidInput("test functions require a real-valued basis");
    return eval.values.row(0).real().transpose();
  }
  if (name == "inspace2") {
    if (!eval.is_real()) throw InvalidInput("test functions require a real-valued basis");
    const Eigen::Index rows = std::min<Eigen::Index>(eval.n(), 3);
    return eval.values.topRows(rows).real().colwise().sum().transpose();
  }
  throw InvalidInput("unknown test function: " + name);
}

}  // namespace sampro
