#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ahm {

struct VerifyOptions {
  /// Seed for the Monte Carlo suites; deterministic suites ignore it.
  std::uint64_t seed = 0;
  /// Relative perturbation applied to C_{n,alpha} inside the kernel-mass
  /// suite only. Used to check that the suite detects a wrong constant.
  double c_perturbation = 0.0;
};

struct SuiteResult {
  std::string name;
  bool passed = true;
  bool deterministic = true;
  int checks = 0;
  int failures = 0;
  double seconds = 0.0;
  /// First few failure descriptions, or a one-line summary on success.
  std::vector<std::string> messages;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool passed() const;
};

/// Runs every invariant suite of the library.
VerifyReport run_verify(const VerifyOptions& options = {});

}  // namespace ahm
