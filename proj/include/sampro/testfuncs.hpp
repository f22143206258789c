#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "sampro/space.hpp"

namespace sampro {

// Named real-valued test functions evaluated on the candidate grid. The
// in-space entries are built from the basis rows so they land in V_n exactly.
std::vector<std::string> test_function_names();

Eigen::VectorXd evaluate_test_function(const std::string& name, const EvalMatrix& eval);

}  // namespace sampro
