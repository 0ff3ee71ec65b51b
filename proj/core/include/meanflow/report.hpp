#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "meanflow/ext_real.hpp"

namespace meanflow {

// A check was asked for outside the hypotheses of the statement it verifies.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One verified inequality instance. pass <=> margin >= 0.
struct BoundReport {
  std::string target;
  std::vector<std::pair<std::string, std::string>> params;
  ExtReal lhs;
  ExtReal rhs;
  ExtReal margin;
  bool pass = false;
  std::string note;

  std::string params_text() const;
};

// margin = rhs - lhs
BoundReport linear_report(std::string target, std::vector<std::pair<std::string, std::string>> params, ExtReal lhs,
                          ExtReal rhs, std::string note = {});

// margin = log(rhs) - log(lhs); the right side is given by its logarithm.
// A vanishing lhs passes with margin equal to rhs.
BoundReport log_report(std::string target, std::vector<std::pair<std::string, std::string>> params, ExtReal lhs,
                       const ExtReal& log_rhs, std::string note = {});

// Equality check: margin = -|rhs - lhs|, so only exact agreement passes.
BoundReport identity_report(std::string target, std::vector<std::pair<std::string, std::string>> params, ExtReal lhs,
                            ExtReal rhs, std::string note = {});

bool all_pass(const std::vector<BoundReport>& reports);

// Deterministic order: by target, then parameter text.
void sort_reports(std::vector<BoundReport>& reports);

}  // namespace meanflow
