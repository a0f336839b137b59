#include "doccalc/kernel/eval.hpp"

#include <algorithm>
#include <set>

#include "doccalc/kernel/stdlib.hpp"
#include "doccalc/util/overloaded.hpp"

namespace doccalc::kernel {

bool is_value(const Expr& e) {
  return std::visit(
      overloaded{
          [](const StrLit&) { return true; },
          [](const BoolE&) { return true; },
          [](const LambdaE&) { return true; },
          [](const TyLambdaE&) { return true; },
          [](const RecordE& x) {
            for (const auto& [l, f] : x.fields)
              if (!is_value(f)) return false;
            return true;
          },
          [](const InjectE& x) { return is_value(x.value); },
          [](const FoldE& x) { return is_value(x.value); },
          [](const PackE& x) { return is_value(x.value); },
          [](const auto&) { return false; },
      },
      e.node());
}

namespace {

[[noreturn]] void stuck(const std::string& what) {
  throw EvalError(EvalErrorKind::StuckTerm, "stuck term: " + what);
}

std::string fresh_name(const std::string& base,
                       const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + "'" + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

// Renames `binder` when it would capture a free variable of `value`.
struct BinderRename {
  std::string binder;
  Expr body;
};

BinderRename avoid_capture(const std::string& binder, const Expr& body,
                           const Expr& value, const std::string& name) {
  auto value_fvs = free_vars(value);
  if (std::find(value_fvs.begin(), value_fvs.end(), binder) ==
      value_fvs.end()) {
    return {binder, body};
  }
  std::set<std::string> avoid(value_fvs.begin(), value_fvs.end());
  for (const auto& v : free_vars(body)) avoid.insert(v);
  avoid.insert(name);
  std::string renamed = fresh_name(binder, avoid);
  return {renamed, subst(body, binder, Expr::var(renamed))};
}

}  // namespace

Expr subst(const Expr& e, const std::string& name, const Expr& value) {
  return std::visit(
      overloaded{
          [&](const StrLit&) { return e; },
          [&](const BoolE&) { return e; },
          [&](const ConcatE& x) {
            return Expr::concat(subst(x.lhs, name, value),
                                subst(x.rhs, name, value));
          },
          [&](const VarE& x) { return x.name == name ? value : e; },
          [&](const LambdaE& x) {
            if (x.param == name) return e;
            auto [binder, body] = avoid_capture(x.param, x.body, value, name);
            return Expr::lambda(binder, x.annot, subst(body, name, value));
          },
          [&](const AppE& x) {
            return Expr::app(subst(x.fn, name, value), subst(x.arg, name, value));
          },
          [&](const FixE& x) {
            if (x.name == name) return e;
            auto [binder, body] = avoid_capture(x.name, x.body, value, name);
            return Expr::fix(binder, x.annot, subst(body, name, value));
          },
          [&](const LetE& x) {
            Expr bound = subst(x.bound, name, value);
            if (x.name == name) return Expr::let_in(x.name, bound, x.body);
            auto [binder, body] = avoid_capture(x.name, x.body, value, name);
            return Expr::let_in(binder, bound, subst(body, name, value));
          },
          [&](const RecordE& x) {
            std::vector<std::pair<std::string, Expr>> fields;
            fields.reserve(x.fields.size());
            for (const auto& [l, f] : x.fields)
              fields.emplace_back(l, subst(f, name, value));
            return Expr::record(std::move(fields));
          },
          [&](const ProjectE& x) {
            return Expr::project(subst(x.value, name, value), x.label);
          },
          [&](const InjectE& x) {
            return Expr::inject(subst(x.value, name, value), x.label, x.annot);
          },
          [&](const CaseE& x) {
            std::vector<CaseArm> arms;
            arms.reserve(x.arms.size());
            for (const auto& arm : x.arms) {
              if (arm.binder == name) {
                arms.push_back(arm);
                continue;
              }
              auto [binder, body] = avoid_capture(arm.binder, arm.body, value, name);
              arms.push_back(CaseArm{arm.label, binder, subst(body, name, value)});
            }
            return Expr::case_of(subst(x.scrutinee, name, value), std::move(arms));
          },
          [&](const FoldE& x) {
            return Expr::fold(x.annot, subst(x.value, name, value));
          },
          [&](const UnfoldE& x) {
            return Expr::unfold(x.annot, subst(x.value, name, value));
          },
          [&](const TyLambdaE& x) {
            return Expr::ty_lambda(x.var, subst(x.body, name, value));
          },
          [&](const TyAppE& x) {
            return Expr::ty_app(subst(x.fn, name, value), x.arg);
          },
          [&](const PackE& x) {
            return Expr::pack(subst(x.value, name, value), x.witness, x.annot);
          },
          [&](const UnpackE& x) {
            Expr packed = subst(x.packed, name, value);
            if (x.binder == name)
              return Expr::unpack(x.binder, x.tyvar, packed, x.body);
            auto [binder, body] = avoid_capture(x.binder, x.body, value, name);
            return Expr::unpack(binder, x.tyvar, packed, subst(body, name, value));
          },
          [&](const IfE& x) {
            return Expr::if_then_else(subst(x.cond, name, value),
                                      subst(x.then_branch, name, value),
                                      subst(x.else_branch, name, value));
          },
          [&](const PrimE& x) {
            std::vector<Expr> args;
            args.reserve(x.args.size());
            for (const auto& a : x.args) args.push_back(subst(a, name, value));
            return Expr::prim(x.name, x.tyargs, std::move(args));
          },
          [&](const TplE&) -> Expr {
            throw std::logic_error(
                "substitution into a template expression; desugar first");
          },
      },
      e.node());
}

namespace {

Type maybe_subst_ty(const Type& t, const std::string& tyvar, const Type& repl) {
  return subst_type(t, tyvar, repl);
}

std::vector<Type> subst_tys(const std::vector<Type>& ts,
                            const std::string& tyvar, const Type& repl) {
  std::vector<Type> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(subst_type(t, tyvar, repl));
  return out;
}

}  // namespace

Expr subst_type_in_expr(const Expr& e, const std::string& tyvar, const Type& t) {
  auto go = [&](const Expr& sub) { return subst_type_in_expr(sub, tyvar, t); };
  return std::visit(
      overloaded{
          [&](const StrLit&) { return e; },
          [&](const BoolE&) { return e; },
          [&](const VarE&) { return e; },
          [&](const ConcatE& x) { return Expr::concat(go(x.lhs), go(x.rhs)); },
          [&](const LambdaE& x) {
            return Expr::lambda(x.param, maybe_subst_ty(x.annot, tyvar, t),
                                go(x.body));
          },
          [&](const AppE& x) { return Expr::app(go(x.fn), go(x.arg)); },
          [&](const FixE& x) {
            return Expr::fix(x.name, maybe_subst_ty(x.annot, tyvar, t),
                             go(x.body));
          },
          [&](const LetE& x) {
            return Expr::let_in(x.name, go(x.bound), go(x.body));
          },
          [&](const RecordE& x) {
            std::vector<std::pair<std::string, Expr>> fields;
            fields.reserve(x.fields.size());
            for (const auto& [l, f] : x.fields) fields.emplace_back(l, go(f));
            return Expr::record(std::move(fields));
          },
          [&](const ProjectE& x) { return Expr::project(go(x.value), x.label); },
          [&](const InjectE& x) {
            return Expr::inject(go(x.value), x.label,
                                maybe_subst_ty(x.annot, tyvar, t));
          },
          [&](const CaseE& x) {
            std::vector<CaseArm> arms;
            arms.reserve(x.arms.size());
            for (const auto& arm : x.arms)
              arms.push_back(CaseArm{arm.label, arm.binder, go(arm.body)});
            return Expr::case_of(go(x.scrutinee), std::move(arms));
          },
          [&](const FoldE& x) {
            return Expr::fold(maybe_subst_ty(x.annot, tyvar, t), go(x.value));
          },
          [&](const UnfoldE& x) {
            return Expr::unfold(maybe_subst_ty(x.annot, tyvar, t), go(x.value));
          },
          [&](const TyLambdaE& x) {
            if (x.var == tyvar) return e;
            auto t_fvs = free_type_vars(t);
            if (std::find(t_fvs.begin(), t_fvs.end(), x.var) != t_fvs.end()) {
              std::set<std::string> avoid(t_fvs.begin(), t_fvs.end());
              avoid.insert(tyvar);
              std::string renamed = fresh_name(x.var, avoid);
              Expr body =
                  subst_type_in_expr(x.body, x.var, Type::var(renamed));
              return Expr::ty_lambda(renamed,
                                     subst_type_in_expr(body, tyvar, t));
            }
            return Expr::ty_lambda(x.var, go(x.body));
          },
          [&](const TyAppE& x) {
            return Expr::ty_app(go(x.fn), maybe_subst_ty(x.arg, tyvar, t));
          },
          [&](const PackE& x) {
            return Expr::pack(go(x.value), maybe_subst_ty(x.witness, tyvar, t),
                              maybe_subst_ty(x.annot, tyvar, t));
          },
          [&](const UnpackE& x) {
            Expr packed = go(x.packed);
            if (x.tyvar == tyvar)
              return Expr::unpack(x.binder, x.tyvar, packed, x.body);
            auto t_fvs = free_type_vars(t);
            if (std::find(t_fvs.begin(), t_fvs.end(), x.tyvar) != t_fvs.end()) {
              std::set<std::string> avoid(t_fvs.begin(), t_fvs.end());
              avoid.insert(tyvar);
              std::string renamed = fresh_name(x.tyvar, avoid);
              Expr body =
                  subst_type_in_expr(x.body, x.tyvar, Type::var(renamed));
              return Expr::unpack(x.binder, renamed, packed,
                                  subst_type_in_expr(body, tyvar, t));
            }
            return Expr::unpack(x.binder, x.tyvar, packed, go(x.body));
          },
          [&](const IfE& x) {
            return Expr::if_then_else(go(x.cond), go(x.then_branch),
                                      go(x.else_branch));
          },
          [&](const PrimE& x) {
            std::vector<Expr> args;
            args.reserve(x.args.size());
            for (const auto& a : x.args) args.push_back(go(a));
            return Expr::prim(x.name, subst_tys(x.tyargs, tyvar, t),
                              std::move(args));
          },
          [&](const TplE&) -> Expr {
            throw std::logic_error(
                "type substitution into a template expression; desugar first");
          },
      },
      e.node());
}

namespace {

// Canonical list values: fold (inject _ at nil/cons).
struct ListView {
  bool is_nil;
  Expr head;   // valid when !is_nil
  Expr tail;   // valid when !is_nil
};

ListView as_list_value(const Expr& v, const char* prim) {
  const auto* fold = std::get_if<FoldE>(&v.node());
  if (!fold) stuck(std::string(prim) + " applied to a non-list value");
  const auto* inj = std::get_if<InjectE>(&fold->value.node());
  if (!inj) stuck(std::string(prim) + " applied to a non-list value");
  if (inj->label == "nil")
    return ListView{true, Expr::bool_lit(false), Expr::bool_lit(false)};
  if (inj->label != "cons")
    stuck(std::string(prim) + " applied to a non-list value");
  const auto* rec = std::get_if<RecordE>(&inj->value.node());
  if (!rec) stuck(std::string(prim) + ": malformed cons cell");
  const Expr* hd = nullptr;
  const Expr* tail = nullptr;
  for (const auto& [l, f] : rec->fields) {
    if (l == "hd") hd = &f;
    else if (l == "tail") tail = &f;
  }
  if (!hd || !tail) stuck(std::string(prim) + ": malformed cons cell");
  return ListView{false, *hd, *tail};
}

Expr apply_prim(const PrimE& p) {
  switch (p.name) {
    case PrimName::Map: {
      const Type& a = p.tyargs[0];
      const Type& b = p.tyargs[1];
      ListView l = as_list_value(p.args[1], "map");
      if (l.is_nil) return stdlib::nil(b);
      return stdlib::cons(b, Expr::app(p.args[0], l.head),
                          Expr::prim(PrimName::Map, {a, b}, {p.args[0], l.tail}));
    }
    case PrimName::Flatten: {
      const Type& a = p.tyargs[0];
      ListView l = as_list_value(p.args[0], "flatten");
      if (l.is_nil) return stdlib::nil(a);
      return Expr::prim(PrimName::Append, {a},
                        {l.head, Expr::prim(PrimName::Flatten, {a}, {l.tail})});
    }
    case PrimName::Append: {
      const Type& a = p.tyargs[0];
      ListView l = as_list_value(p.args[0], "append");
      if (l.is_nil) return p.args[1];
      return stdlib::cons(
          a, l.head, Expr::prim(PrimName::Append, {a}, {l.tail, p.args[1]}));
    }
    case PrimName::Join: {
      ListView l = as_list_value(p.args[0], "join");
      if (l.is_nil) return Expr::str_lit("");
      return Expr::concat(l.head, Expr::prim(PrimName::Join, {}, {l.tail}));
    }
    case PrimName::Rev: {
      const Type& a = p.tyargs[0];
      ListView l = as_list_value(p.args[0], "rev");
      if (l.is_nil) return stdlib::nil(a);
      return Expr::prim(PrimName::Append, {a},
                        {Expr::prim(PrimName::Rev, {a}, {l.tail}),
                         stdlib::cons(a, l.head, stdlib::nil(a))});
    }
    case PrimName::StrEq: {
      const auto* s1 = std::get_if<StrLit>(&p.args[0].node());
      const auto* s2 = std::get_if<StrLit>(&p.args[1].node());
      if (!s1 || !s2) stuck("str-eq applied to non-strings");
      return Expr::bool_lit(s1->value == s2->value);
    }
  }
  stuck("unknown primitive");
}

}  // namespace

std::optional<Expr> step(const Expr& e) {
  if (is_value(e)) return std::nullopt;
  return std::visit(
      overloaded{
          [&](const ConcatE& x) -> std::optional<Expr> {
            if (auto lhs = step(x.lhs)) return Expr::concat(*lhs, x.rhs);
            if (auto rhs = step(x.rhs)) return Expr::concat(x.lhs, *rhs);
            const auto* s1 = std::get_if<StrLit>(&x.lhs.node());
            const auto* s2 = std::get_if<StrLit>(&x.rhs.node());
            if (!s1 || !s2) stuck("concat of non-strings");
            return Expr::str_lit(s1->value + s2->value);
          },
          [&](const VarE& x) -> std::optional<Expr> {
            stuck("free variable '" + x.name + "'");
            return std::nullopt;
          },
          [&](const AppE& x) -> std::optional<Expr> {
            if (auto fn = step(x.fn)) return Expr::app(*fn, x.arg);
            if (auto arg = step(x.arg)) return Expr::app(x.fn, *arg);
            const auto* lam = std::get_if<LambdaE>(&x.fn.node());
            if (!lam) stuck("application of a non-function");
            return subst(lam->body, lam->param, x.arg);
          },
          [&](const FixE& x) -> std::optional<Expr> {
            return subst(x.body, x.name, e);
          },
          [&](const LetE& x) -> std::optional<Expr> {
            if (auto bound = step(x.bound))
              return Expr::let_in(x.name, *bound, x.body);
            return subst(x.body, x.name, x.bound);
          },
          [&](const RecordE& x) -> std::optional<Expr> {
            auto fields = x.fields;
            for (auto& [l, f] : fields) {
              if (!is_value(f)) {
                auto stepped = step(f);
                if (!stepped) stuck("record field");
                f = *stepped;
                return Expr::record(std::move(fields));
              }
            }
            stuck("record");
            return std::nullopt;
          },
          [&](const ProjectE& x) -> std::optional<Expr> {
            if (auto value = step(x.value)) return Expr::project(*value, x.label);
            const auto* rec = std::get_if<RecordE>(&x.value.node());
            if (!rec) stuck("projection from a non-record");
            for (const auto& [l, f] : rec->fields) {
              if (l == x.label) return f;
            }
            stuck("projection of a missing field '" + x.label + "'");
            return std::nullopt;
          },
          [&](const InjectE& x) -> std::optional<Expr> {
            auto value = step(x.value);
            if (!value) stuck("inject");
            return Expr::inject(*value, x.label, x.annot);
          },
          [&](const CaseE& x) -> std::optional<Expr> {
            if (auto scrut = step(x.scrutinee))
              return Expr::case_of(*scrut, x.arms);
            const auto* inj = std::get_if<InjectE>(&x.scrutinee.node());
            if (!inj) stuck("case of a non-sum value");
            for (const auto& arm : x.arms) {
              if (arm.label == inj->label)
                return subst(arm.body, arm.binder, inj->value);
            }
            stuck("case without arm '" + inj->label + "'");
            return std::nullopt;
          },
          [&](const FoldE& x) -> std::optional<Expr> {
            auto value = step(x.value);
            if (!value) stuck("fold");
            return Expr::fold(x.annot, *value);
          },
          [&](const UnfoldE& x) -> std::optional<Expr> {
            if (auto value = step(x.value)) return Expr::unfold(x.annot, *value);
            const auto* fold = std::get_if<FoldE>(&x.value.node());
            if (!fold) stuck("unfold of a non-fold value");
            return fold->value;
          },
          [&](const TyAppE& x) -> std::optional<Expr> {
            if (auto fn = step(x.fn)) return Expr::ty_app(*fn, x.arg);
            const auto* tl = std::get_if<TyLambdaE>(&x.fn.node());
            if (!tl) stuck("type application of a non-polymorphic value");
            return subst_type_in_expr(tl->body, tl->var, x.arg);
          },
          [&](const PackE& x) -> std::optional<Expr> {
            auto value = step(x.value);
            if (!value) stuck("pack");
            return Expr::pack(*value, x.witness, x.annot);
          },
          [&](const UnpackE& x) -> std::optional<Expr> {
            if (auto packed = step(x.packed))
              return Expr::unpack(x.binder, x.tyvar, *packed, x.body);
            const auto* pk = std::get_if<PackE>(&x.packed.node());
            if (!pk) stuck("unpack of a non-pack value");
            Expr body = subst_type_in_expr(x.body, x.tyvar, pk->witness);
            return subst(body, x.binder, pk->value);
          },
          [&](const IfE& x) -> std::optional<Expr> {
            if (auto cond = step(x.cond))
              return Expr::if_then_else(*cond, x.then_branch, x.else_branch);
            const auto* b = std::get_if<BoolE>(&x.cond.node());
            if (!b) stuck("if on a non-boolean");
            return b->value ? x.then_branch : x.else_branch;
          },
          [&](const PrimE& x) -> std::optional<Expr> {
            auto args = x.args;
            for (auto& a : args) {
              if (!is_value(a)) {
                auto stepped = step(a);
                if (!stepped) stuck("primitive argument");
                a = *stepped;
                return Expr::prim(x.name, x.tyargs, std::move(args));
              }
            }
            return apply_prim(x);
          },
          [&](const TplE&) -> std::optional<Expr> {
            stuck("template expression in evaluation; desugar first");
            return std::nullopt;
          },
          [&](const auto&) -> std::optional<Expr> {
            stuck("no rule");
            return std::nullopt;
          },
      },
      e.node());
}

Expr eval(const Expr& e, std::uint64_t fuel) {
  Expr cur = e;
  for (std::uint64_t used = 0; used <= fuel; ++used) {
    auto next = step(cur);
    if (!next) return cur;
    cur = *next;
  }
  throw EvalError(EvalErrorKind::FuelExhausted,
                  "evaluation did not finish within " + std::to_string(fuel) +
                      " steps");
}

}  // namespace doccalc::kernel
