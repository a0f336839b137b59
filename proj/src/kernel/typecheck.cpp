#include "doccalc/kernel/typecheck.hpp"

#include <algorithm>
#include <set>

#include "doccalc/kernel/stdlib.hpp"
#include "doccalc/template/typecheck.hpp"
#include "doccalc/util/overloaded.hpp"

namespace doccalc::kernel {

TyCtxt TyCtxt::with_term(std::string name, Type type) const {
  TyCtxt out = *this;
  out.entries_.push_back(TermBinding{std::move(name), std::move(type)});
  return out;
}

TyCtxt TyCtxt::with_tyvar(std::string name) const {
  TyCtxt out = *this;
  out.entries_.push_back(TypeVarBinding{std::move(name)});
  return out;
}

TyCtxt TyCtxt::with_tpl(Type elem) const {
  TyCtxt out;
  for (const auto& entry : entries_) {
    if (!std::holds_alternative<TplBinding>(entry)) out.entries_.push_back(entry);
  }
  out.entries_.push_back(TplBinding{std::move(elem)});
  return out;
}

std::optional<Type> TyCtxt::lookup_term(const std::string& name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (const auto* tb = std::get_if<TermBinding>(&*it)) {
      if (tb->name == name) return tb->type;
    }
  }
  return std::nullopt;
}

bool TyCtxt::has_tyvar(const std::string& name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (const auto* tv = std::get_if<TypeVarBinding>(&*it)) {
      if (tv->name == name) return true;
    }
  }
  return false;
}

std::optional<Type> TyCtxt::current_tpl() const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (const auto* tpl = std::get_if<TplBinding>(&*it)) return tpl->elem;
  }
  return std::nullopt;
}

namespace {

void require_wf(const TyCtxt& ctx, const Type& t, const std::string& where) {
  for (const auto& v : free_type_vars(t)) {
    if (!ctx.has_tyvar(v)) {
      throw TypeError(TypeErrorKind::UnboundVariable,
                      "unbound type variable '" + v + "'", where);
    }
  }
}

void require_equal(const Type& expected, const Type& found,
                   const std::string& where) {
  if (!type_equal(expected, found)) {
    throw TypeError(TypeErrorKind::TypeMismatch,
                    "expected " + stdlib::type_display_name(expected) +
                        ", found " + stdlib::type_display_name(found),
                    where);
  }
}

}  // namespace

Type typecheck(const TyCtxt& ctx, const Expr& e) {
  return std::visit(
      overloaded{
          [&](const StrLit&) { return Type::str(); },
          [&](const BoolE&) { return Type::boolean(); },
          [&](const ConcatE& x) {
            require_equal(Type::str(), typecheck(ctx, x.lhs), "concat lhs");
            require_equal(Type::str(), typecheck(ctx, x.rhs), "concat rhs");
            return Type::str();
          },
          [&](const VarE& x) {
            auto found = ctx.lookup_term(x.name);
            if (!found) {
              throw TypeError(TypeErrorKind::UnboundVariable,
                              "unbound variable '" + x.name + "'");
            }
            return *found;
          },
          [&](const LambdaE& x) {
            require_wf(ctx, x.annot, "lambda annotation");
            Type body = typecheck(ctx.with_term(x.param, x.annot), x.body);
            return Type::arrow(x.annot, body);
          },
          [&](const AppE& x) {
            Type fn = typecheck(ctx, x.fn);
            const auto* arrow = std::get_if<ArrowTy>(&fn.node());
            if (!arrow) {
              throw TypeError(TypeErrorKind::TypeMismatch,
                              "expected a function, found " +
                                  stdlib::type_display_name(fn),
                              "application");
            }
            require_equal(arrow->param, typecheck(ctx, x.arg),
                          "application argument");
            return arrow->result;
          },
          [&](const FixE& x) {
            require_wf(ctx, x.annot, "fix annotation");
            require_equal(x.annot, typecheck(ctx.with_term(x.name, x.annot), x.body),
                          "fix body");
            return x.annot;
          },
          [&](const LetE& x) {
            Type bound = typecheck(ctx, x.bound);
            return typecheck(ctx.with_term(x.name, bound), x.body);
          },
          [&](const RecordE& x) {
            std::vector<std::pair<std::string, Type>> fields;
            std::set<std::string> labels;
            fields.reserve(x.fields.size());
            for (const auto& [l, f] : x.fields) {
              if (!labels.insert(l).second) {
                throw TypeError(TypeErrorKind::TypeMismatch,
                                "duplicate record label '" + l + "'");
              }
              fields.emplace_back(l, typecheck(ctx, f));
            }
            return Type::record(std::move(fields));
          },
          [&](const ProjectE& x) {
            Type value = typecheck(ctx, x.value);
            const auto* rec = std::get_if<RecordTy>(&value.node());
            if (!rec) {
              throw TypeError(TypeErrorKind::TypeMismatch,
                              "expected a record, found " +
                                  stdlib::type_display_name(value),
                              "projection");
            }
            for (const auto& [l, ft] : rec->fields) {
              if (l == x.label) return ft;
            }
            throw TypeError(TypeErrorKind::UnknownLabel,
                            "no field '" + x.label + "' in " +
                                stdlib::type_display_name(value));
          },
          [&](const InjectE& x) {
            require_wf(ctx, x.annot, "injection annotation");
            const auto* sum = std::get_if<SumTy>(&x.annot.node());
            if (!sum) {
              throw TypeError(TypeErrorKind::TypeMismatch,
                              "injection annotation must be a sum type");
            }
            for (const auto& [l, vt] : sum->variants) {
              if (l == x.label) {
                require_equal(vt, typecheck(ctx, x.value), "injection payload");
                return x.annot;
              }
            }
            throw TypeError(TypeErrorKind::UnknownLabel,
                            "no variant '" + x.label + "' in " +
                                stdlib::type_display_name(x.annot));
          },
          [&](const CaseE& x) {
            Type scrut = typecheck(ctx, x.scrutinee);
            const auto* sum = std::get_if<SumTy>(&scrut.node());
            if (!sum) {
              throw TypeError(TypeErrorKind::TypeMismatch,
                              "expected a sum, found " +
                                  stdlib::type_display_name(scrut),
                              "case scrutinee");
            }
            std::set<std::string> want;
            for (const auto& [l, vt] : sum->variants) want.insert(l);
            std::set<std::string> got;
            for (const auto& arm : x.arms) got.insert(arm.label);
            if (want != got || x.arms.size() != sum->variants.size()) {
              throw TypeError(TypeErrorKind::NonExhaustiveCase,
                              "case arms must cover exactly the sum variants");
            }
            std::optional<Type> result;
            for (const auto& arm : x.arms) {
              Type payload = [&] {
                for (const auto& [l, vt] : sum->variants) {
                  if (l == arm.label) return vt;
                }
                throw TypeError(TypeErrorKind::UnknownLabel, arm.label);
              }();
              Type body =
                  typecheck(ctx.with_term(arm.binder, payload), arm.body);
              if (!result) {
                result = body;
              } else {
                require_equal(*result, body, "case arm '" + arm.label + "'");
              }
            }
            if (!result) {
              throw TypeError(TypeErrorKind::NonExhaustiveCase,
                              "case over empty sum");
            }
            return *result;
          },
          [&](const FoldE& x) {
            require_wf(ctx, x.annot, "fold annotation");
            const auto* mu = std::get_if<MuTy>(&x.annot.node());
            if (!mu) {
              throw TypeError(TypeErrorKind::TypeMismatch,
                              "fold annotation must be a recursive type");
            }
            Type unrolled = subst_type(mu->body, mu->var, x.annot);
            require_equal(unrolled, typecheck(ctx, x.value), "fold payload");
            return x.annot;
          },
          [&](const UnfoldE& x) {
            require_wf(ctx, x.annot, "unfold annotation");
            const auto* mu = std::get_if<MuTy>(&x.annot.node());
            if (!mu) {
              throw TypeError(TypeErrorKind::TypeMismatch,
                              "unfold annotation must be a recursive type");
            }
            require_equal(x.annot, typecheck(ctx, x.value), "unfold payload");
            return subst_type(mu->body, mu->var, x.annot);
          },
          [&](const TyLambdaE& x) {
            Type body = typecheck(ctx.with_tyvar(x.var), x.body);
            return Type::forall(x.var, body);
          },
          [&](const TyAppE& x) {
            require_wf(ctx, x.arg, "type application argument");
            Type fn = typecheck(ctx, x.fn);
            const auto* fa = std::get_if<ForallTy>(&fn.node());
            if (!fa) {
              throw TypeError(TypeErrorKind::TypeMismatch,
                              "expected a polymorphic term, found " +
                                  stdlib::type_display_name(fn),
                              "type application");
            }
            return subst_type(fa->body, fa->var, x.arg);
          },
          [&](const PackE& x) {
            require_wf(ctx, x.witness, "pack witness");
            require_wf(ctx, x.annot, "pack annotation");
            const auto* ex = std::get_if<ExistsTy>(&x.annot.node());
            if (!ex) {
              throw TypeError(TypeErrorKind::TypeMismatch,
                              "pack annotation must be an existential type");
            }
            Type expected = subst_type(ex->body, ex->var, x.witness);
            require_equal(expected, typecheck(ctx, x.value), "pack payload");
            return x.annot;
          },
          [&](const UnpackE& x) {
            Type packed = typecheck(ctx, x.packed);
            const auto* ex = std::get_if<ExistsTy>(&packed.node());
            if (!ex) {
              throw TypeError(TypeErrorKind::TypeMismatch,
                              "expected an existential, found " +
                                  stdlib::type_display_name(packed),
                              "unpack");
            }
            Type payload = subst_type(ex->body, ex->var, Type::var(x.tyvar));
            Type body = typecheck(
                ctx.with_tyvar(x.tyvar).with_term(x.binder, payload), x.body);
            auto fvs = free_type_vars(body);
            if (std::find(fvs.begin(), fvs.end(), x.tyvar) != fvs.end()) {
              throw TypeError(TypeErrorKind::TypeMismatch,
                              "existential type variable '" + x.tyvar +
                                  "' escapes its scope");
            }
            return body;
          },
          [&](const IfE& x) {
            require_equal(Type::boolean(), typecheck(ctx, x.cond),
                          "if condition");
            Type then_ty = typecheck(ctx, x.then_branch);
            require_equal(then_ty, typecheck(ctx, x.else_branch), "if branches");
            return then_ty;
          },
          [&](const PrimE& x) {
            auto arity = [&](size_t tyargs, size_t args) {
              if (x.tyargs.size() != tyargs || x.args.size() != args) {
                throw TypeError(TypeErrorKind::TypeMismatch,
                                std::string("wrong arity for ") +
                                    prim_name_str(x.name));
              }
            };
            for (const auto& ta : x.tyargs)
              require_wf(ctx, ta, "primitive type argument");
            switch (x.name) {
              case PrimName::Map: {
                arity(2, 2);
                const Type& a = x.tyargs[0];
                const Type& b = x.tyargs[1];
                require_equal(Type::arrow(a, b), typecheck(ctx, x.args[0]),
                              "map function");
                require_equal(stdlib::list_type(a), typecheck(ctx, x.args[1]),
                              "map list");
                return stdlib::list_type(b);
              }
              case PrimName::Flatten: {
                arity(1, 1);
                const Type& a = x.tyargs[0];
                require_equal(stdlib::list_type(stdlib::list_type(a)),
                              typecheck(ctx, x.args[0]), "flatten list");
                return stdlib::list_type(a);
              }
              case PrimName::Append: {
                arity(1, 2);
                const Type& a = x.tyargs[0];
                require_equal(stdlib::list_type(a), typecheck(ctx, x.args[0]),
                              "append lhs");
                require_equal(stdlib::list_type(a), typecheck(ctx, x.args[1]),
                              "append rhs");
                return stdlib::list_type(a);
              }
              case PrimName::Join: {
                arity(0, 1);
                require_equal(stdlib::list_type(Type::str()),
                              typecheck(ctx, x.args[0]), "join list");
                return Type::str();
              }
              case PrimName::Rev: {
                arity(1, 1);
                const Type& a = x.tyargs[0];
                require_equal(stdlib::list_type(a), typecheck(ctx, x.args[0]),
                              "rev list");
                return stdlib::list_type(a);
              }
              case PrimName::StrEq: {
                arity(0, 2);
                require_equal(Type::str(), typecheck(ctx, x.args[0]),
                              "str-eq lhs");
                require_equal(Type::str(), typecheck(ctx, x.args[1]),
                              "str-eq rhs");
                return Type::boolean();
              }
            }
            throw TypeError(TypeErrorKind::TypeMismatch, "unknown primitive");
          },
          [&](const TplE& x) {
            tpl::ContextType tctx = tpl::context_for_kind(x.kind);
            Type elem = tpl::context_elem_type(tctx);
            Type list = tpl::typecheck_template(ctx.with_tpl(elem), x.body);
            switch (x.kind) {
              case TplKind::StrTpl: return Type::str();
              case TplKind::TreeTpl: return list;
              case TplKind::FlowTpl: return list;
              case TplKind::FragTpl: return stdlib::list_type(stdlib::node_ty());
              case TplKind::ReactTpl: return list;
            }
            return list;
          },
      },
      e.node());
}

}  // namespace doccalc::kernel
