#pragma once

#include <Eigen/Dense>

namespace nnc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Shared numeric tolerances. Geometry predicates treat quantities below
// kGeomTol as zero; interior tests probe with the larger kInteriorProbe
// margin so that "strictly inside" survives downstream floating-point use.
inline constexpr double kGeomTol = 1e-9;
inline constexpr double kInteriorProbe = 1e-7;
inline constexpr double kSteadyStateTol = 1e-9;
inline constexpr double kFiniteDiffTol = 1e-5;

}  // namespace nnc
