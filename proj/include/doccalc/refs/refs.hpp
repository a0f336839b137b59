#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "doccalc/doc/node.hpp"

// Staged reference resolution: build the identifier context, validate
// references, and substitute section numbers.
namespace doccalc::refs {

// Maps identifiers to section number stacks, innermost counter first.
// ("sub" inside the second section is stored as [1, 2] and renders "2.1".)
using IdCtxt = std::vector<std::pair<std::string, std::vector<int>>>;

enum class RefErrorKind { UnknownTarget, DuplicateId };

struct RefError {
  RefErrorKind kind;
  std::string id;
  std::vector<int> path;  // node path for unknown targets
};

struct RefsException : std::runtime_error {
  std::vector<RefError> errors;

  explicit RefsException(std::vector<RefError> errs);
};

// Walks one node with the current counter stack; returns the identifier
// entries found and the updated stack.
std::pair<IdCtxt, std::vector<int>> sections_at(std::vector<int> counters,
                                                const doc::NodeTy& n);

IdCtxt sections(const doc::NodeList& doc);

// Ok (empty vector) iff identifiers are unique and every ref target is
// declared.
std::vector<RefError> check_valid(const IdCtxt& ctx, const doc::NodeList& doc);

std::string section_number_to_string(const std::vector<int>& nums);

// Replaces every ref node by the rendered number of its target; throws
// RefsException on an unknown target.
doc::NodeList replace_refs(const IdCtxt& ctx, const doc::NodeList& doc);

// replace_refs(sections(doc), doc), after validity checking.
doc::NodeList render_refs(const doc::NodeList& doc);

}  // namespace doccalc::refs
