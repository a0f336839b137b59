#pragma once

#include <stdexcept>
#include <string>

#include "doccalc/kernel/ast.hpp"
#include "doccalc/kernel/typecheck.hpp"
#include "doccalc/template/typecheck.hpp"

namespace doccalc::tpl {

enum class DesugarErrorKind {
  ComponentOutsideReact,
  NodeInStrContext,
  SpliceInFragContext,
};

struct DesugarError : std::runtime_error {
  DesugarErrorKind kind;
  std::string location;

  DesugarError(DesugarErrorKind k, const std::string& message,
               std::string loc = std::string())
      : std::runtime_error(loc.empty() ? message : loc + ": " + message),
        kind(k),
        location(std::move(loc)) {}
};

struct DesugarOptions {
  // Elaborate tree templates through the fragment pipeline instead of
  // splices. The two agree on evaluated node lists.
  bool fragment_strategy = false;
  // Keep the paragraph that the reforest equations emit even when the
  // accumulator is empty.
  bool literal_reforest = false;
};

// Translates every template expression into the kernel. The result contains
// no template constructor. Bare expressions under a tree context are typed
// to decide elaboration, so `e` must typecheck in `ctx` wherever templates
// occur.
kernel::Expr desugar(const kernel::Expr& e, const DesugarOptions& opts = {});
kernel::Expr desugar_expr(const kernel::TyCtxt& ctx, const kernel::Expr& e,
                          const DesugarOptions& opts = {});

// Elaborates a template body as a list of `ctx`-elements.
kernel::Expr desugar_template(const kernel::TyCtxt& ctx,
                              const kernel::Template& t, ContextType tctx,
                              const DesugarOptions& opts = {});

}  // namespace doccalc::tpl
