#pragma once

#include "wsurg/recursion.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace wsurg {

// Per-call resolution state: the keys currently being resolved, and a count
// of the cycles met so far (failures seen under a cycle are not memoized).
struct Engine::Ctx {
  std::vector<std::string> stack;
  std::set<std::string> active;
  std::size_t cycles = 0;
  // Failures within this call, cycle-tainted or not.
  std::map<std::string, std::string> failed;
};

namespace detail {

ProvenanceP leaf(const Integer& value, std::string rule, std::string key, std::string note = {},
                 std::string citation = {});
ProvenanceP node(const Integer& value, std::string rule, std::string key, std::string note,
                 std::vector<Integer> coefficients, std::vector<ProvenanceP> children);
std::string clip(const std::string& s);

}  // namespace detail
}  // namespace wsurg
