#include "corrcolim/report.hpp"

#include <algorithm>

namespace corrcolim {

Check& Report::add(const std::string& name, double defect, const std::string& witness) {
  checks.push_back({name, defect, defect <= tol, witness});
  return checks.back();
}

Check& Report::flag(const std::string& name, bool ok, const std::string& witness, double defect) {
  checks.push_back({name, defect, ok, witness});
  return checks.back();
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (auto c : other.checks) {
    c.name = prefix + c.name;
    checks.push_back(c);
  }
  for (const auto& n : other.notes) notes.push_back(prefix + n);
}

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

double Report::max_defect() const {
  double m = 0;
  for (const auto& c : checks) m = std::max(m, c.defect);
  return m;
}

const Check* Report::first_failure() const {
  for (const auto& c : checks)
    if (!c.pass) return &c;
  return nullptr;
}

const Check* Report::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace corrcolim
