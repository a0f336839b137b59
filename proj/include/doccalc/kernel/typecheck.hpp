#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "doccalc/kernel/ast.hpp"

namespace doccalc::kernel {

enum class TypeErrorKind {
  UnboundVariable,
  TypeMismatch,
  UnknownLabel,
  NonExhaustiveCase,
  TemplateOutsideContext,
  ComponentOutsideReact,
};

struct TypeError : std::runtime_error {
  TypeErrorKind kind;
  std::string location;

  TypeError(TypeErrorKind k, const std::string& message,
            std::string loc = std::string())
      : std::runtime_error(loc.empty() ? message : loc + ": " + message),
        kind(k),
        location(std::move(loc)) {}
};

struct TermBinding {
  std::string name;
  Type type;
};
struct TypeVarBinding {
  std::string name;
};
struct TplBinding {
  Type elem;
};

// Ordered typing context; lookup returns the most recent binding. A new
// template fact replaces the previous one rather than stacking.
class TyCtxt {
 public:
  TyCtxt() = default;

  TyCtxt with_term(std::string name, Type type) const;
  TyCtxt with_tyvar(std::string name) const;
  TyCtxt with_tpl(Type elem) const;

  std::optional<Type> lookup_term(const std::string& name) const;
  bool has_tyvar(const std::string& name) const;
  std::optional<Type> current_tpl() const;

 private:
  std::vector<std::variant<TermBinding, TypeVarBinding, TplBinding>> entries_;
};

// Synthesizes the unique type of `e`, or throws TypeError.
Type typecheck(const TyCtxt& ctx, const Expr& e);

}  // namespace doccalc::kernel
