#pragma once

#include <functional>
#include <vector>

#include "cycloproj/subspaces.hpp"

namespace cycloproj {

// One entry per full sweep of the cyclic method; index 0 is the start.
struct MapTrace {
  std::size_t sweeps = 0;
  std::vector<CVector> iterates;     // x_0, x_n, x_2n, ...
  std::vector<double> errors;        // ||x_kn - P_0 x_0||
  std::vector<double> contraction;   // errors[k] / errors[k-1], k >= 1 (0 when errors[k-1] == 0)
};

// Called after every single projection when supplied: (sweep, subspace index, iterate).
using ProjectionHook = std::function<void(std::size_t, std::size_t, const CVector&)>;

MapTrace run_map(const SubspaceSystem& sys, const CVector& x0, std::size_t sweeps,
                 const ProjectionHook& hook = {});

// P_n ... P_2 P_1
ComplexMatrix sweep_operator(const SubspaceSystem& sys);

// ||P_n ... P_1 - P_0||
double product_operator_norm(const SubspaceSystem& sys);

// ||P_n ... P_1|| without removing the intersection.
double product_norm(const SubspaceSystem& sys);

ComplexMatrix matrix_power(const ComplexMatrix& a, unsigned k);

struct RateCheckReport {
  double measured_friedrichs = 0.0;
  double rate = 0.0;               // upper bound used for f_n(c)
  std::vector<double> norms;       // ||(P_n...P_1)^k - P_0||, k = 1..sweeps
  std::vector<double> bounds;      // rate^k
  bool all_hold = true;
};

// Checks ||(P_n...P_1)^k - P_0|| <= rate^k + 1e-9 for k = 1..sweeps, where
// rate is an upper bound for f_n(c). Requires c_F(sys) <= c + 1e-9.
RateCheckReport rate_check(const SubspaceSystem& sys, double c, std::size_t sweeps);

}  // namespace cycloproj
