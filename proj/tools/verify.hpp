#pragma once

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace infogeo::cli {

/// Deliberate defects for checking that the suite notices them.
enum class Fault {
  none,
  psi2,  ///< psi'' off by 1%
};

Fault parse_fault(const std::string& name);

struct VerifyContext {
  Fault fault = Fault::none;
  std::uint64_t seed = 1;
};

struct PropertyResult {
  bool ok = false;
  std::string detail;
};

struct Property {
  std::string module;
  std::string name;
  std::function<PropertyResult(const VerifyContext&)> run;
};

/// Every invariant, grouped by module in dependency order.
const std::vector<Property>& property_registry();

struct VerifyReport {
  int passed = 0;
  int failed = 0;
  nlohmann::json json;  ///< {"passed", "failed", "results": [...], "failures": [...]}
};

/// Runs the properties of `module` (all when empty). Throws DomainError for
/// an unknown module name. Exceptions inside a property count as failures.
VerifyReport run_verify(const std::string& module, const VerifyContext& ctx);

}  // namespace infogeo::cli
