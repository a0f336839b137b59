#include "doccalc/refs/refs.hpp"

#include <optional>
#include <set>
#include <sstream>

#include "doccalc/util/overloaded.hpp"

namespace doccalc::refs {

using doc::NodeList;
using doc::NodeTy;
using doc::StructNode;
using doc::TextNode;

namespace {

std::optional<std::string> attr_value(const StructNode& s,
                                      const std::string& key) {
  for (const auto& [k, v] : s.attrs) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string describe(const RefError& e) {
  switch (e.kind) {
    case RefErrorKind::UnknownTarget:
      return "unknown ref target '" + e.id + "' at " +
             doc::path_to_string(e.path);
    case RefErrorKind::DuplicateId:
      return "duplicate section id '" + e.id + "'";
  }
  return "reference error";
}

std::string describe_all(const std::vector<RefError>& errs) {
  std::ostringstream os;
  for (size_t i = 0; i < errs.size(); ++i) {
    if (i) os << "; ";
    os << describe(errs[i]);
  }
  return os.str();
}

std::pair<IdCtxt, std::vector<int>> sections_at_list(std::vector<int> counters,
                                                     const NodeList& nodes) {
  IdCtxt out;
  for (const auto& n : nodes) {
    auto [found, next] = sections_at(std::move(counters), n);
    out.insert(out.end(), found.begin(), found.end());
    counters = std::move(next);
  }
  return {out, counters};
}

}  // namespace

std::pair<IdCtxt, std::vector<int>> sections_at(std::vector<int> counters,
                                                const NodeTy& n) {
  return std::visit(
      overloaded{
          [&](const TextNode&) {
            return std::pair<IdCtxt, std::vector<int>>{{}, counters};
          },
          [&](const StructNode& s) {
            if (s.name == "section") {
              // fresh subsection counter on the stack for the children
              std::vector<int> inner = counters;
              inner.insert(inner.begin(), 1);
              auto [child_ctx, ignored] = sections_at_list(inner, s.children);
              IdCtxt out;
              if (auto id = attr_value(s, "id")) {
                out.emplace_back(*id, counters);
              }
              out.insert(out.end(), child_ctx.begin(), child_ctx.end());
              std::vector<int> next = counters;
              next[0] += 1;
              return std::pair<IdCtxt, std::vector<int>>{out, next};
            }
            // non-section nodes thread the counters at the same level
            return sections_at_list(counters, s.children);
          },
      },
      n);
}

IdCtxt sections(const NodeList& doc) {
  return sections_at_list({1}, doc).first;
}

std::vector<RefError> check_valid(const IdCtxt& ctx, const NodeList& doc) {
  std::vector<RefError> errors;

  std::set<std::string> ids;
  for (const auto& [id, nums] : ctx) {
    if (!ids.insert(id).second) {
      errors.push_back(RefError{RefErrorKind::DuplicateId, id, {}});
    }
  }

  std::vector<int> path;
  auto walk = [&](auto&& self, const NodeList& nodes) -> void {
    for (size_t i = 0; i < nodes.size(); ++i) {
      path.push_back(static_cast<int>(i));
      if (const auto* s = std::get_if<StructNode>(&nodes[i])) {
        if (s->name == "ref") {
          auto target = attr_value(*s, "target");
          std::string id = target.value_or("");
          if (!target || !ids.count(*target)) {
            errors.push_back(RefError{RefErrorKind::UnknownTarget, id, path});
          }
        }
        self(self, s->children);
      }
      path.pop_back();
    }
  };
  walk(walk, doc);
  return errors;
}

std::string section_number_to_string(const std::vector<int>& nums) {
  std::ostringstream os;
  for (auto it = nums.rbegin(); it != nums.rend(); ++it) {
    if (it != nums.rbegin()) os << ".";
    os << *it;
  }
  return os.str();
}

NodeList replace_refs(const IdCtxt& ctx, const NodeList& doc) {
  NodeList out;
  out.reserve(doc.size());
  for (const auto& n : doc) {
    out.push_back(std::visit(
        overloaded{
            [&](const TextNode& t) { return NodeTy(t); },
            [&](const StructNode& s) {
              if (s.name == "ref") {
                auto target = attr_value(s, "target");
                if (target) {
                  for (const auto& [id, nums] : ctx) {
                    if (id == *target)
                      return doc::text(section_number_to_string(nums));
                  }
                }
                throw RefsException({RefError{RefErrorKind::UnknownTarget,
                                              target.value_or(""),
                                              {}}});
              }
              return doc::node(s.name, s.attrs, replace_refs(ctx, s.children));
            },
        },
        n));
  }
  return out;
}

NodeList render_refs(const NodeList& doc) {
  IdCtxt ctx = sections(doc);
  auto errors = check_valid(ctx, doc);
  if (!errors.empty()) throw RefsException(std::move(errors));
  return replace_refs(ctx, doc);
}

RefsException::RefsException(std::vector<RefError> errs)
    : std::runtime_error(describe_all(errs)), errors(std::move(errs)) {}

}  // namespace doccalc::refs
