#ifndef MEMFV_VERIFY_HPP
#define MEMFV_VERIFY_HPP

#include <string>
#include <vector>

namespace memfv {

struct VerifyReport {
  std::vector<std::string> lines;
  bool passed = true;

  void check(bool ok, const std::string& name, double lhs, double rhs);
  std::string text() const;
};

// Built-in fixture checks behind `verify --suite <name>`;
// name is one of all, elliptic, parabolic, monitors.
VerifyReport run_verify_suite(const std::string& suite);

}  // namespace memfv

#endif
