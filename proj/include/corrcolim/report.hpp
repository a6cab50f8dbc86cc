#ifndef CORRCOLIM_REPORT_HPP
#define CORRCOLIM_REPORT_HPP

#include <string>
#include <vector>

namespace corrcolim {

inline constexpr double kDefaultTol = 1e-9;

// One measured quantity. Numeric checks pass when defect <= tol;
// structural ones carry an explicit verdict.
struct Check {
  std::string name;
  double defect = 0.0;
  bool pass = true;
  std::string witness;
};

struct Report {
  double tol = kDefaultTol;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  Report() = default;
  explicit Report(double t) : tol(t) {}

  Check& add(const std::string& name, double defect, const std::string& witness = "");
  Check& flag(const std::string& name, bool ok, const std::string& witness = "", double defect = 0.0);
  void note(const std::string& s) { notes.push_back(s); }
  void merge(const Report& other, const std::string& prefix = "");

  bool pass() const;
  double max_defect() const;
  const Check* first_failure() const;
  const Check* find(const std::string& name) const;
};

}  // namespace corrcolim

#endif
