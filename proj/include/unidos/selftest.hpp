#pragma once

#include <string>
#include <vector>

#include "unidos/transfer.hpp"

namespace unidos {

struct CheckResult {
  std::string name;
  std::string claim;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

using TransferFn = Mat2 (*)(double, double, SpectralParameter, const Coefficients&);

struct SelftestOptions {
  TransferFn transfer = &transfer_matrix;  // swapped out by fault-injection tests
  unsigned threads = 0;
};

/// Fast subset of the acceptance checks.
std::vector<CheckResult> run_selftest(const SelftestOptions& options = {});

}  // namespace unidos
