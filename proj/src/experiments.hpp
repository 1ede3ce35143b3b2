#pragma once

#include <memory>

#include "analysis.hpp"
#include "ripg_stokes.hpp"

namespace ripg {

struct ManufacturedResult {
  bool spd = false;
  std::size_t dofs = 0;
  double h = 0.0;
  ErrorNorms errors;        // NaN when !spd
  FlowDiagnostics flow;     // NaN when !spd
  double relative_residual = 0.0;
};

/// Manufactured Stokes problem on the n x n mesh of (-1, 1)^2 with
/// zero-penetration walls carrying the exact tangential velocity.
ManufacturedResult solve_manufactured(int n, int degree, double delta = 2.0);

}  // namespace ripg
