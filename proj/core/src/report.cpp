#include "meanflow/report.hpp"

#include <algorithm>

namespace meanflow {

std::string BoundReport::params_text() const {
  std::string s;
  for (const auto& [k, v] : params) {
    if (!s.empty()) s += ';';
    s += k + '=' + v;
  }
  return s;
}

BoundReport linear_report(std::string target, std::vector<std::pair<std::string, std::string>> params, ExtReal lhs,
                          ExtReal rhs, std::string note) {
  BoundReport r;
  r.target = std::move(target);
  r.params = std::move(params);
  r.margin = rhs - lhs;
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  r.pass = r.margin.sign() >= 0;
  r.note = std::move(note);
  return r;
}

BoundReport log_report(std::string target, std::vector<std::pair<std::string, std::string>> params, ExtReal lhs,
                       const ExtReal& log_rhs, std::string note) {
  BoundReport r;
  r.target = std::move(target);
  r.params = std::move(params);
  r.rhs = exp(log_rhs);
  if (lhs.is_zero()) {
    r.margin = r.rhs;
  } else {
    r.margin = log_rhs - log(abs(lhs));
  }
  r.lhs = std::move(lhs);
  r.pass = r.margin.sign() >= 0;
  r.note = std::move(note);
  return r;
}

BoundReport identity_report(std::string target, std::vector<std::pair<std::string, std::string>> params, ExtReal lhs,
                            ExtReal rhs, std::string note) {
  BoundReport r;
  r.target = std::move(target);
  r.params = std::move(params);
  const ExtReal gap = abs(rhs - lhs);
  r.margin = gap.is_zero() ? ExtReal(0) : -gap;
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  r.pass = r.margin.sign() >= 0;
  r.note = std::move(note);
  return r;
}

bool all_pass(const std::vector<BoundReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const BoundReport& r) { return r.pass; });
}

void sort_reports(std::vector<BoundReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const BoundReport& a, const BoundReport& b) {
    if (a.target != b.target) return a.target < b.target;
    return a.params_text() < b.params_text();
  });
}

}  // namespace meanflow
