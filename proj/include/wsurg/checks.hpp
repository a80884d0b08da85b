#pragma once

// Structural checks on catalog surgeries and surfaces, shared by the
// `verify` command and the test suites.

#include "wsurg/surfaces.hpp"

#include <string>
#include <vector>

namespace wsurg {

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;  // the counterexample when !ok
};

/// Sphere class, Euler characteristic jump, eigenlattice rank and
/// orthogonality, agreement of the tau-invariant mod-2 classes inside [S]^perp,
/// and tau_Y = tau_X o r_S.
std::vector<CheckResult> check_surgery(const Catalog& catalog, const SurgeryRecord& rec);

/// Every surface validates and every surgery passes check_surgery.
std::vector<CheckResult> check_catalog(const Catalog& catalog);

}  // namespace wsurg
