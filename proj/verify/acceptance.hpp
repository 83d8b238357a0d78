#ifndef MIXNORM_VERIFY_ACCEPTANCE_HPP
#define MIXNORM_VERIFY_ACCEPTANCE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mixnorm::acceptance {

struct Options {
  std::uint64_t seed = 20240611;
  std::size_t replicas = 100000;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double limit_seconds = 0.0;
  /// Per-case table written by `verify`; contains no timings.
  std::string csv_name;
  std::string csv;
};

/// Runs criteria 1-9 in order, calling on_result after each.
std::vector<CriterionResult> run(const Options& options,
                                 const std::function<void(const CriterionResult&)>& on_result = {});

/// Criterion 10: byte equality of the CSV tables of two runs.
CriterionResult reproducibility(const std::vector<CriterionResult>& first,
                                const std::vector<CriterionResult>& second);

/// "[PASS] 4 moment bound ... (12.3 s / 60 s)"
std::string format_line(const CriterionResult& result);

}  // namespace mixnorm::acceptance

#endif  // MIXNORM_VERIFY_ACCEPTANCE_HPP
