#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "doccalc/kernel/ast.hpp"

namespace doccalc::tpl {

struct Theorem1Case {
  kernel::Expr term;
  std::string type_before;
  std::string type_after;
};

struct Theorem1Report {
  std::size_t checked = 0;
  std::vector<Theorem1Case> failures;

  bool ok() const { return failures.empty(); }
};

// Generates `count` random well-typed template expressions (all five
// template kinds, full part grammar) and checks that desugaring preserves
// the synthesized type. Failures are report entries, never exceptions.
Theorem1Report check_theorem1(std::uint64_t seed, std::size_t count);

}  // namespace doccalc::tpl
