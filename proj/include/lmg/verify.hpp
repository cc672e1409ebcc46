#pragma once

// Invariant suite behind `lmgdecoh verify`: parity selection rules,
// completeness, the pointer/eigenstate J01 identity, eigensolver quality,
// the depletion ledger, the doublet Liouvillian and the two-channel roots.

#include <string>
#include <vector>

#include "lmg/io.hpp"

namespace lmg {

struct CheckResult {
  std::string name;
  int n_spins = 0;
  double gamma_over_j = 0;
  double value = 0;  // measured error
  double bound = 0;
  bool passed = false;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  double seconds = 0;

  bool passed() const;
  std::size_t failures() const;
};

enum class Fault {
  None,
  JzSignFlip,  // jz_element weights |m| instead of m
};

struct VerifyOptions {
  std::vector<int> n_grid = {20, 50, 100, 200, 370, 500, 1000, 2000};
  std::vector<double> gamma_grid = {0.5, 0.95};
  double dephasing = kDefaultDephasing;
  Fault fault = Fault::None;
  unsigned workers = 0;
};

/// Checks run at one (N, Gamma/J) point on a precomputed decomposition.
std::vector<CheckResult> point_checks(const ModelParams& params, const EigenSystemD& eig,
                                      Fault fault = Fault::None);

/// Closed-form doublet and two-channel checks (independent of N).
std::vector<CheckResult> theory_checks(const std::vector<double>& j01_values, double dephasing);

VerifyReport run_verification(const VerifyOptions& opt = {});

Json report_json(const VerifyReport& report);

}  // namespace lmg
