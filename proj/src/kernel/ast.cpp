#include "doccalc/kernel/ast.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "doccalc/util/overloaded.hpp"

namespace doccalc::kernel {

namespace {

template <class Node>
std::shared_ptr<const Node> mk(Node n) {
  return std::make_shared<const Node>(std::move(n));
}

}  // namespace

// --- Type factories ---------------------------------------------------------

Type Type::str() {
  static const Type cached(mk(TypeNode(StrTy{})));
  return cached;
}
Type Type::boolean() {
  static const Type cached(mk(TypeNode(BoolTy{})));
  return cached;
}
Type Type::arrow(Type param, Type result) {
  return Type(mk(TypeNode(ArrowTy{std::move(param), std::move(result)})));
}
Type Type::record(std::vector<std::pair<std::string, Type>> fields) {
  return Type(mk(TypeNode(RecordTy{std::move(fields)})));
}
Type Type::sum(std::vector<std::pair<std::string, Type>> variants) {
  return Type(mk(TypeNode(SumTy{std::move(variants)})));
}
Type Type::forall(std::string var, Type body) {
  return Type(mk(TypeNode(ForallTy{std::move(var), std::move(body)})));
}
Type Type::mu(std::string var, Type body) {
  return Type(mk(TypeNode(MuTy{std::move(var), std::move(body)})));
}
Type Type::exists(std::string var, Type body) {
  return Type(mk(TypeNode(ExistsTy{std::move(var), std::move(body)})));
}
Type Type::var(std::string name) {
  return Type(mk(TypeNode(TyVar{std::move(name)})));
}

// --- Type equality (alpha-equivalence, labels as sets) -----------------------

namespace {

using BindEnv = std::map<std::string, int>;

bool type_equal_rec(const Type& a, const Type& b, BindEnv enva, BindEnv envb,
                    int depth) {
  const TypeNode& na = a.node();
  const TypeNode& nb = b.node();
  // shared subtrees are alpha-equal as long as no binders were crossed
  if (&na == &nb && enva.empty() && envb.empty()) return true;
  if (na.index() != nb.index()) return false;
  return std::visit(
      overloaded{
          [](const StrTy&) { return true; },
          [](const BoolTy&) { return true; },
          [&](const ArrowTy& x) {
            const auto& y = std::get<ArrowTy>(nb);
            return type_equal_rec(x.param, y.param, enva, envb, depth) &&
                   type_equal_rec(x.result, y.result, enva, envb, depth);
          },
          [&](const RecordTy& x) {
            const auto& y = std::get<RecordTy>(nb);
            if (x.fields.size() != y.fields.size()) return false;
            auto xs = x.fields;
            auto ys = y.fields;
            auto by_label = [](const auto& p, const auto& q) {
              return p.first < q.first;
            };
            std::sort(xs.begin(), xs.end(), by_label);
            std::sort(ys.begin(), ys.end(), by_label);
            for (size_t i = 0; i < xs.size(); ++i) {
              if (xs[i].first != ys[i].first) return false;
              if (!type_equal_rec(xs[i].second, ys[i].second, enva, envb, depth))
                return false;
            }
            return true;
          },
          [&](const SumTy& x) {
            const auto& y = std::get<SumTy>(nb);
            if (x.variants.size() != y.variants.size()) return false;
            auto xs = x.variants;
            auto ys = y.variants;
            auto by_label = [](const auto& p, const auto& q) {
              return p.first < q.first;
            };
            std::sort(xs.begin(), xs.end(), by_label);
            std::sort(ys.begin(), ys.end(), by_label);
            for (size_t i = 0; i < xs.size(); ++i) {
              if (xs[i].first != ys[i].first) return false;
              if (!type_equal_rec(xs[i].second, ys[i].second, enva, envb, depth))
                return false;
            }
            return true;
          },
          [&](const ForallTy& x) {
            const auto& y = std::get<ForallTy>(nb);
            enva[x.var] = depth;
            envb[y.var] = depth;
            return type_equal_rec(x.body, y.body, enva, envb, depth + 1);
          },
          [&](const MuTy& x) {
            const auto& y = std::get<MuTy>(nb);
            enva[x.var] = depth;
            envb[y.var] = depth;
            return type_equal_rec(x.body, y.body, enva, envb, depth + 1);
          },
          [&](const ExistsTy& x) {
            const auto& y = std::get<ExistsTy>(nb);
            enva[x.var] = depth;
            envb[y.var] = depth;
            return type_equal_rec(x.body, y.body, enva, envb, depth + 1);
          },
          [&](const TyVar& x) {
            const auto& y = std::get<TyVar>(nb);
            auto ia = enva.find(x.name);
            auto ib = envb.find(y.name);
            if (ia != enva.end() && ib != envb.end())
              return ia->second == ib->second;
            if (ia == enva.end() && ib == envb.end()) return x.name == y.name;
            return false;
          },
      },
      na);
}

}  // namespace

bool type_equal(const Type& a, const Type& b) {
  return type_equal_rec(a, b, {}, {}, 0);
}

bool operator==(const Type& a, const Type& b) { return type_equal(a, b); }

// --- Free type variables / substitution --------------------------------------

namespace {

void free_type_vars_rec(const Type& t, std::set<std::string>& bound,
                        std::vector<std::string>& out,
                        std::set<std::string>& seen) {
  std::visit(
      overloaded{
          [](const StrTy&) {}, [](const BoolTy&) {},
          [&](const ArrowTy& x) {
            free_type_vars_rec(x.param, bound, out, seen);
            free_type_vars_rec(x.result, bound, out, seen);
          },
          [&](const RecordTy& x) {
            for (const auto& [l, ft] : x.fields)
              free_type_vars_rec(ft, bound, out, seen);
          },
          [&](const SumTy& x) {
            for (const auto& [l, vt] : x.variants)
              free_type_vars_rec(vt, bound, out, seen);
          },
          [&](const ForallTy& x) {
            bool fresh = bound.insert(x.var).second;
            free_type_vars_rec(x.body, bound, out, seen);
            if (fresh) bound.erase(x.var);
          },
          [&](const MuTy& x) {
            bool fresh = bound.insert(x.var).second;
            free_type_vars_rec(x.body, bound, out, seen);
            if (fresh) bound.erase(x.var);
          },
          [&](const ExistsTy& x) {
            bool fresh = bound.insert(x.var).second;
            free_type_vars_rec(x.body, bound, out, seen);
            if (fresh) bound.erase(x.var);
          },
          [&](const TyVar& x) {
            if (!bound.count(x.name) && seen.insert(x.name).second)
              out.push_back(x.name);
          },
      },
      t.node());
}

std::string fresh_name(const std::string& base,
                       const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + "'" + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

template <class Binder>
Type subst_under_binder(const std::string& var, const Type& body,
                        const std::string& name, const Type& repl,
                        Binder rebuild) {
  if (var == name) return rebuild(var, body);
  auto repl_fvs = free_type_vars(repl);
  if (std::find(repl_fvs.begin(), repl_fvs.end(), var) != repl_fvs.end()) {
    std::set<std::string> avoid(repl_fvs.begin(), repl_fvs.end());
    for (const auto& v : free_type_vars(body)) avoid.insert(v);
    avoid.insert(name);
    std::string renamed = fresh_name(var, avoid);
    Type body2 = subst_type(body, var, Type::var(renamed));
    return rebuild(renamed, subst_type(body2, name, repl));
  }
  return rebuild(var, subst_type(body, name, repl));
}

}  // namespace

std::vector<std::string> free_type_vars(const Type& t) {
  std::set<std::string> bound;
  std::set<std::string> seen;
  std::vector<std::string> out;
  free_type_vars_rec(t, bound, out, seen);
  return out;
}

Type subst_type(const Type& t, const std::string& name, const Type& repl) {
  return std::visit(
      overloaded{
          [&](const StrTy&) { return t; }, [&](const BoolTy&) { return t; },
          [&](const ArrowTy& x) {
            return Type::arrow(subst_type(x.param, name, repl),
                               subst_type(x.result, name, repl));
          },
          [&](const RecordTy& x) {
            std::vector<std::pair<std::string, Type>> fields;
            fields.reserve(x.fields.size());
            for (const auto& [l, ft] : x.fields)
              fields.emplace_back(l, subst_type(ft, name, repl));
            return Type::record(std::move(fields));
          },
          [&](const SumTy& x) {
            std::vector<std::pair<std::string, Type>> variants;
            variants.reserve(x.variants.size());
            for (const auto& [l, vt] : x.variants)
              variants.emplace_back(l, subst_type(vt, name, repl));
            return Type::sum(std::move(variants));
          },
          [&](const ForallTy& x) {
            return subst_under_binder(x.var, x.body, name, repl,
                                      [](std::string v, Type b) {
                                        return Type::forall(std::move(v),
                                                            std::move(b));
                                      });
          },
          [&](const MuTy& x) {
            return subst_under_binder(
                x.var, x.body, name, repl,
                [](std::string v, Type b) { return Type::mu(std::move(v), std::move(b)); });
          },
          [&](const ExistsTy& x) {
            return subst_under_binder(x.var, x.body, name, repl,
                                      [](std::string v, Type b) {
                                        return Type::exists(std::move(v),
                                                            std::move(b));
                                      });
          },
          [&](const TyVar& x) { return x.name == name ? repl : t; },
      },
      t.node());
}

// --- Expr factories -----------------------------------------------------------

Expr Expr::str_lit(std::string value) {
  return Expr(mk(ExprNode(StrLit{std::move(value)})));
}
Expr Expr::concat(Expr lhs, Expr rhs) {
  return Expr(mk(ExprNode(ConcatE{std::move(lhs), std::move(rhs)})));
}
Expr Expr::var(std::string name) {
  return Expr(mk(ExprNode(VarE{std::move(name)})));
}
Expr Expr::lambda(std::string param, Type annot, Expr body) {
  return Expr(
      mk(ExprNode(LambdaE{std::move(param), std::move(annot), std::move(body)})));
}
Expr Expr::app(Expr fn, Expr arg) {
  return Expr(mk(ExprNode(AppE{std::move(fn), std::move(arg)})));
}
Expr Expr::fix(std::string name, Type annot, Expr body) {
  return Expr(
      mk(ExprNode(FixE{std::move(name), std::move(annot), std::move(body)})));
}
Expr Expr::let_in(std::string name, Expr bound, Expr body) {
  return Expr(
      mk(ExprNode(LetE{std::move(name), std::move(bound), std::move(body)})));
}
Expr Expr::record(std::vector<std::pair<std::string, Expr>> fields) {
  return Expr(mk(ExprNode(RecordE{std::move(fields)})));
}
Expr Expr::project(Expr value, std::string label) {
  return Expr(mk(ExprNode(ProjectE{std::move(value), std::move(label)})));
}
Expr Expr::inject(Expr value, std::string label, Type sum_annot) {
  return Expr(mk(
      ExprNode(InjectE{std::move(value), std::move(label), std::move(sum_annot)})));
}
Expr Expr::case_of(Expr scrutinee, std::vector<CaseArm> arms) {
  return Expr(mk(ExprNode(CaseE{std::move(scrutinee), std::move(arms)})));
}
Expr Expr::fold(Type mu_annot, Expr value) {
  return Expr(mk(ExprNode(FoldE{std::move(mu_annot), std::move(value)})));
}
Expr Expr::unfold(Type mu_annot, Expr value) {
  return Expr(mk(ExprNode(UnfoldE{std::move(mu_annot), std::move(value)})));
}
Expr Expr::ty_lambda(std::string var, Expr body) {
  return Expr(mk(ExprNode(TyLambdaE{std::move(var), std::move(body)})));
}
Expr Expr::ty_app(Expr fn, Type arg) {
  return Expr(mk(ExprNode(TyAppE{std::move(fn), std::move(arg)})));
}
Expr Expr::pack(Expr value, Type witness, Type exists_annot) {
  return Expr(mk(ExprNode(
      PackE{std::move(value), std::move(witness), std::move(exists_annot)})));
}
Expr Expr::unpack(std::string binder, std::string tyvar, Expr packed, Expr body) {
  return Expr(mk(ExprNode(UnpackE{std::move(binder), std::move(tyvar),
                                  std::move(packed), std::move(body)})));
}
Expr Expr::bool_lit(bool value) { return Expr(mk(ExprNode(BoolE{value}))); }
Expr Expr::if_then_else(Expr cond, Expr then_branch, Expr else_branch) {
  return Expr(mk(ExprNode(
      IfE{std::move(cond), std::move(then_branch), std::move(else_branch)})));
}
Expr Expr::prim(PrimName name, std::vector<Type> tyargs, std::vector<Expr> args) {
  return Expr(mk(ExprNode(PrimE{name, std::move(tyargs), std::move(args)})));
}
Expr Expr::tpl(TplKind kind, Template t) {
  return Expr(mk(ExprNode(TplE{kind, std::move(t)})));
}

const char* prim_name_str(PrimName p) {
  switch (p) {
    case PrimName::Map: return "map";
    case PrimName::Flatten: return "flatten";
    case PrimName::Append: return "append";
    case PrimName::Join: return "join";
    case PrimName::Rev: return "rev";
    case PrimName::StrEq: return "str-eq";
  }
  return "?";
}

std::optional<PrimName> prim_name_parse(const std::string& s) {
  if (s == "map") return PrimName::Map;
  if (s == "flatten") return PrimName::Flatten;
  if (s == "append") return PrimName::Append;
  if (s == "join") return PrimName::Join;
  if (s == "rev") return PrimName::Rev;
  if (s == "str-eq") return PrimName::StrEq;
  return std::nullopt;
}

const char* tpl_kind_str(TplKind k) {
  switch (k) {
    case TplKind::StrTpl: return "strtpl";
    case TplKind::TreeTpl: return "treetpl";
    case TplKind::FragTpl: return "fragtpl";
    case TplKind::FlowTpl: return "flowtpl";
    case TplKind::ReactTpl: return "reacttpl";
  }
  return "?";
}

// --- structural equality ------------------------------------------------------

namespace {
bool expr_equal(const Expr& a, const Expr& b);

bool tpl_part_equal(const TemplatePart& a, const TemplatePart& b);

bool tpl_equal(const Template& a, const Template& b) {
  if (a.parts.size() != b.parts.size()) return false;
  for (size_t i = 0; i < a.parts.size(); ++i)
    if (!tpl_part_equal(a.parts[i], b.parts[i])) return false;
  return true;
}

bool tpl_part_equal(const TemplatePart& a, const TemplatePart& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      overloaded{
          [&](const LitPart& x) { return x.value == std::get<LitPart>(b).value; },
          [&](const ExprPart& x) {
            return expr_equal(x.expr, std::get<ExprPart>(b).expr);
          },
          [&](const SetPart& x) {
            const auto& y = std::get<SetPart>(b);
            return x.name == y.name && expr_equal(x.expr, y.expr);
          },
          [&](const IfPart& x) {
            const auto& y = std::get<IfPart>(b);
            return expr_equal(x.cond, y.cond) &&
                   tpl_equal(x.then_parts, y.then_parts) &&
                   tpl_equal(x.else_parts, y.else_parts);
          },
          [&](const ForeachPart& x) {
            const auto& y = std::get<ForeachPart>(b);
            return x.binder == y.binder && expr_equal(x.source, y.source) &&
                   tpl_equal(x.body, y.body);
          },
          [&](const NodePart& x) {
            const auto& y = std::get<NodePart>(b);
            if (x.name != y.name || x.attrs.size() != y.attrs.size())
              return false;
            for (size_t i = 0; i < x.attrs.size(); ++i) {
              if (x.attrs[i].key != y.attrs[i].key ||
                  !expr_equal(x.attrs[i].value, y.attrs[i].value))
                return false;
            }
            return tpl_equal(x.children, y.children);
          },
          [&](const SplicePart& x) {
            return expr_equal(x.expr, std::get<SplicePart>(b).expr);
          },
          [&](const ComponentPart& x) {
            const auto& y = std::get<ComponentPart>(b);
            return expr_equal(x.component, y.component) &&
                   expr_equal(x.props, y.props);
          },
      },
      a);
}

bool expr_equal(const Expr& a, const Expr& b) {
  const ExprNode& na = a.node();
  const ExprNode& nb = b.node();
  if (&na == &nb) return true;
  if (na.index() != nb.index()) return false;
  return std::visit(
      overloaded{
          [&](const StrLit& x) { return x.value == std::get<StrLit>(nb).value; },
          [&](const ConcatE& x) {
            const auto& y = std::get<ConcatE>(nb);
            return expr_equal(x.lhs, y.lhs) && expr_equal(x.rhs, y.rhs);
          },
          [&](const VarE& x) { return x.name == std::get<VarE>(nb).name; },
          [&](const LambdaE& x) {
            const auto& y = std::get<LambdaE>(nb);
            return x.param == y.param && x.annot == y.annot &&
                   expr_equal(x.body, y.body);
          },
          [&](const AppE& x) {
            const auto& y = std::get<AppE>(nb);
            return expr_equal(x.fn, y.fn) && expr_equal(x.arg, y.arg);
          },
          [&](const FixE& x) {
            const auto& y = std::get<FixE>(nb);
            return x.name == y.name && x.annot == y.annot &&
                   expr_equal(x.body, y.body);
          },
          [&](const LetE& x) {
            const auto& y = std::get<LetE>(nb);
            return x.name == y.name && expr_equal(x.bound, y.bound) &&
                   expr_equal(x.body, y.body);
          },
          [&](const RecordE& x) {
            const auto& y = std::get<RecordE>(nb);
            if (x.fields.size() != y.fields.size()) return false;
            for (size_t i = 0; i < x.fields.size(); ++i) {
              if (x.fields[i].first != y.fields[i].first ||
                  !expr_equal(x.fields[i].second, y.fields[i].second))
                return false;
            }
            return true;
          },
          [&](const ProjectE& x) {
            const auto& y = std::get<ProjectE>(nb);
            return x.label == y.label && expr_equal(x.value, y.value);
          },
          [&](const InjectE& x) {
            const auto& y = std::get<InjectE>(nb);
            return x.label == y.label && x.annot == y.annot &&
                   expr_equal(x.value, y.value);
          },
          [&](const CaseE& x) {
            const auto& y = std::get<CaseE>(nb);
            if (!expr_equal(x.scrutinee, y.scrutinee)) return false;
            if (x.arms.size() != y.arms.size()) return false;
            for (size_t i = 0; i < x.arms.size(); ++i) {
              if (x.arms[i].label != y.arms[i].label ||
                  x.arms[i].binder != y.arms[i].binder ||
                  !expr_equal(x.arms[i].body, y.arms[i].body))
                return false;
            }
            return true;
          },
          [&](const FoldE& x) {
            const auto& y = std::get<FoldE>(nb);
            return x.annot == y.annot && expr_equal(x.value, y.value);
          },
          [&](const UnfoldE& x) {
            const auto& y = std::get<UnfoldE>(nb);
            return x.annot == y.annot && expr_equal(x.value, y.value);
          },
          [&](const TyLambdaE& x) {
            const auto& y = std::get<TyLambdaE>(nb);
            return x.var == y.var && expr_equal(x.body, y.body);
          },
          [&](const TyAppE& x) {
            const auto& y = std::get<TyAppE>(nb);
            return x.arg == y.arg && expr_equal(x.fn, y.fn);
          },
          [&](const PackE& x) {
            const auto& y = std::get<PackE>(nb);
            return x.witness == y.witness && x.annot == y.annot &&
                   expr_equal(x.value, y.value);
          },
          [&](const UnpackE& x) {
            const auto& y = std::get<UnpackE>(nb);
            return x.binder == y.binder && x.tyvar == y.tyvar &&
                   expr_equal(x.packed, y.packed) && expr_equal(x.body, y.body);
          },
          [&](const BoolE& x) { return x.value == std::get<BoolE>(nb).value; },
          [&](const IfE& x) {
            const auto& y = std::get<IfE>(nb);
            return expr_equal(x.cond, y.cond) &&
                   expr_equal(x.then_branch, y.then_branch) &&
                   expr_equal(x.else_branch, y.else_branch);
          },
          [&](const PrimE& x) {
            const auto& y = std::get<PrimE>(nb);
            if (x.name != y.name || x.tyargs.size() != y.tyargs.size() ||
                x.args.size() != y.args.size())
              return false;
            for (size_t i = 0; i < x.tyargs.size(); ++i)
              if (x.tyargs[i] != y.tyargs[i]) return false;
            for (size_t i = 0; i < x.args.size(); ++i)
              if (!expr_equal(x.args[i], y.args[i])) return false;
            return true;
          },
          [&](const TplE& x) {
            const auto& y = std::get<TplE>(nb);
            return x.kind == y.kind && tpl_equal(x.body, y.body);
          },
      },
      na);
}

}  // namespace

bool operator==(const Expr& a, const Expr& b) { return expr_equal(a, b); }
bool operator==(const Template& a, const Template& b) { return tpl_equal(a, b); }
bool operator==(const TemplatePart& a, const TemplatePart& b) {
  return tpl_part_equal(a, b);
}

// --- free variables / template scan -------------------------------------------

namespace {

struct FreeVarScan {
  std::set<std::string> bound;
  std::set<std::string> seen;
  std::vector<std::string> out;

  void hit(const std::string& name) {
    if (!bound.count(name) && seen.insert(name).second) out.push_back(name);
  }

  template <class F>
  void with_bound(const std::string& name, F f) {
    bool fresh = bound.insert(name).second;
    f();
    if (fresh) bound.erase(name);
  }

  void scan_template(const Template& t) {
    // set parts bind for the remainder of the list
    std::vector<std::string> introduced;
    for (const auto& part : t.parts) {
      std::visit(
          overloaded{
              [&](const LitPart&) {},
              [&](const ExprPart& p) { scan(p.expr); },
              [&](const SetPart& p) {
                scan(p.expr);
                if (bound.insert(p.name).second) introduced.push_back(p.name);
              },
              [&](const IfPart& p) {
                scan(p.cond);
                scan_template(p.then_parts);
                scan_template(p.else_parts);
              },
              [&](const ForeachPart& p) {
                scan(p.source);
                with_bound(p.binder, [&] { scan_template(p.body); });
              },
              [&](const NodePart& p) {
                for (const auto& a : p.attrs) scan(a.value);
                scan_template(p.children);
              },
              [&](const SplicePart& p) { scan(p.expr); },
              [&](const ComponentPart& p) {
                scan(p.component);
                scan(p.props);
              },
          },
          part);
    }
    for (const auto& name : introduced) bound.erase(name);
  }

  void scan(const Expr& e) {
    std::visit(
        overloaded{
            [&](const StrLit&) {}, [&](const BoolE&) {},
            [&](const ConcatE& x) {
              scan(x.lhs);
              scan(x.rhs);
            },
            [&](const VarE& x) { hit(x.name); },
            [&](const LambdaE& x) {
              with_bound(x.param, [&] { scan(x.body); });
            },
            [&](const AppE& x) {
              scan(x.fn);
              scan(x.arg);
            },
            [&](const FixE& x) {
              with_bound(x.name, [&] { scan(x.body); });
            },
            [&](const LetE& x) {
              scan(x.bound);
              with_bound(x.name, [&] { scan(x.body); });
            },
            [&](const RecordE& x) {
              for (const auto& [l, f] : x.fields) scan(f);
            },
            [&](const ProjectE& x) { scan(x.value); },
            [&](const InjectE& x) { scan(x.value); },
            [&](const CaseE& x) {
              scan(x.scrutinee);
              for (const auto& arm : x.arms)
                with_bound(arm.binder, [&] { scan(arm.body); });
            },
            [&](const FoldE& x) { scan(x.value); },
            [&](const UnfoldE& x) { scan(x.value); },
            [&](const TyLambdaE& x) { scan(x.body); },
            [&](const TyAppE& x) { scan(x.fn); },
            [&](const PackE& x) { scan(x.value); },
            [&](const UnpackE& x) {
              scan(x.packed);
              with_bound(x.binder, [&] { scan(x.body); });
            },
            [&](const IfE& x) {
              scan(x.cond);
              scan(x.then_branch);
              scan(x.else_branch);
            },
            [&](const PrimE& x) {
              for (const auto& a : x.args) scan(a);
            },
            [&](const TplE& x) { scan_template(x.body); },
        },
        e.node());
  }
};

bool template_free(const Template& t);

bool template_free_expr(const Expr& e) {
  return std::visit(
      overloaded{
          [](const StrLit&) { return true; }, [](const BoolE&) { return true; },
          [](const VarE&) { return true; },
          [](const ConcatE& x) {
            return template_free_expr(x.lhs) && template_free_expr(x.rhs);
          },
          [](const LambdaE& x) { return template_free_expr(x.body); },
          [](const AppE& x) {
            return template_free_expr(x.fn) && template_free_expr(x.arg);
          },
          [](const FixE& x) { return template_free_expr(x.body); },
          [](const LetE& x) {
            return template_free_expr(x.bound) && template_free_expr(x.body);
          },
          [](const RecordE& x) {
            for (const auto& [l, f] : x.fields)
              if (!template_free_expr(f)) return false;
            return true;
          },
          [](const ProjectE& x) { return template_free_expr(x.value); },
          [](const InjectE& x) { return template_free_expr(x.value); },
          [](const CaseE& x) {
            if (!template_free_expr(x.scrutinee)) return false;
            for (const auto& arm : x.arms)
              if (!template_free_expr(arm.body)) return false;
            return true;
          },
          [](const FoldE& x) { return template_free_expr(x.value); },
          [](const UnfoldE& x) { return template_free_expr(x.value); },
          [](const TyLambdaE& x) { return template_free_expr(x.body); },
          [](const TyAppE& x) { return template_free_expr(x.fn); },
          [](const PackE& x) { return template_free_expr(x.value); },
          [](const UnpackE& x) {
            return template_free_expr(x.packed) && template_free_expr(x.body);
          },
          [](const IfE& x) {
            return template_free_expr(x.cond) &&
                   template_free_expr(x.then_branch) &&
                   template_free_expr(x.else_branch);
          },
          [](const PrimE& x) {
            for (const auto& a : x.args)
              if (!template_free_expr(a)) return false;
            return true;
          },
          [](const TplE&) { return false; },
      },
      e.node());
}

bool template_free(const Template& t) {
  for (const auto& part : t.parts) {
    bool ok = std::visit(
        overloaded{
            [](const LitPart&) { return true; },
            [](const ExprPart& p) { return template_free_expr(p.expr); },
            [](const SetPart& p) { return template_free_expr(p.expr); },
            [](const IfPart& p) {
              return template_free_expr(p.cond) && template_free(p.then_parts) &&
                     template_free(p.else_parts);
            },
            [](const ForeachPart& p) {
              return template_free_expr(p.source) && template_free(p.body);
            },
            [](const NodePart& p) {
              for (const auto& a : p.attrs)
                if (!template_free_expr(a.value)) return false;
              return template_free(p.children);
            },
            [](const SplicePart& p) { return template_free_expr(p.expr); },
            [](const ComponentPart& p) {
              return template_free_expr(p.component) &&
                     template_free_expr(p.props);
            },
        },
        part);
    if (!ok) return false;
  }
  return true;
}

}  // namespace

std::vector<std::string> free_vars(const Expr& e) {
  FreeVarScan scan;
  scan.scan(e);
  return scan.out;
}

bool contains_template(const Expr& e) { return !template_free_expr(e); }

// --- printing -----------------------------------------------------------------

namespace {

void print_type(std::ostringstream& os, const Type& t) {
  std::visit(
      overloaded{
          [&](const StrTy&) { os << "Str"; },
          [&](const BoolTy&) { os << "Bool"; },
          [&](const ArrowTy& x) {
            os << "(";
            print_type(os, x.param);
            os << " -> ";
            print_type(os, x.result);
            os << ")";
          },
          [&](const RecordTy& x) {
            os << "{";
            bool first = true;
            for (const auto& [l, ft] : x.fields) {
              if (!first) os << ", ";
              first = false;
              os << l << ": ";
              print_type(os, ft);
            }
            os << "}";
          },
          [&](const SumTy& x) {
            os << "<";
            bool first = true;
            for (const auto& [l, vt] : x.variants) {
              if (!first) os << " | ";
              first = false;
              os << l << ": ";
              print_type(os, vt);
            }
            os << ">";
          },
          [&](const ForallTy& x) {
            os << "(forall " << x.var << ". ";
            print_type(os, x.body);
            os << ")";
          },
          [&](const MuTy& x) {
            os << "(mu " << x.var << ". ";
            print_type(os, x.body);
            os << ")";
          },
          [&](const ExistsTy& x) {
            os << "(exists " << x.var << ". ";
            print_type(os, x.body);
            os << ")";
          },
          [&](const TyVar& x) { os << x.name; },
      },
      t.node());
}

void print_expr(std::ostringstream& os, const Expr& e);

void print_template(std::ostringstream& os, const Template& t) {
  os << "[";
  bool first = true;
  for (const auto& part : t.parts) {
    if (!first) os << ", ";
    first = false;
    std::visit(
        overloaded{
            [&](const LitPart& p) { os << '"' << p.value << '"'; },
            [&](const ExprPart& p) { print_expr(os, p.expr); },
            [&](const SetPart& p) {
              os << "set " << p.name << " = ";
              print_expr(os, p.expr);
            },
            [&](const IfPart& p) {
              os << "if ";
              print_expr(os, p.cond);
              os << " then ";
              print_template(os, p.then_parts);
              os << " else ";
              print_template(os, p.else_parts);
            },
            [&](const ForeachPart& p) {
              os << "foreach ";
              print_expr(os, p.source);
              os << " as " << p.binder << " ";
              print_template(os, p.body);
            },
            [&](const NodePart& p) {
              os << "node(" << p.name << ", [";
              bool f2 = true;
              for (const auto& a : p.attrs) {
                if (!f2) os << ", ";
                f2 = false;
                os << "(" << a.key << ", ";
                print_expr(os, a.value);
                os << ")";
              }
              os << "], ";
              print_template(os, p.children);
              os << ")";
            },
            [&](const SplicePart& p) {
              os << "splice ";
              print_expr(os, p.expr);
            },
            [&](const ComponentPart& p) {
              os << "component ";
              print_expr(os, p.component);
              os << " ";
              print_expr(os, p.props);
            },
        },
        part);
  }
  os << "]";
}

void print_expr(std::ostringstream& os, const Expr& e) {
  std::visit(
      overloaded{
          [&](const StrLit& x) { os << '"' << x.value << '"'; },
          [&](const ConcatE& x) {
            os << "(";
            print_expr(os, x.lhs);
            os << " + ";
            print_expr(os, x.rhs);
            os << ")";
          },
          [&](const VarE& x) { os << x.name; },
          [&](const LambdaE& x) {
            os << "(\\(" << x.param << ": ";
            print_type(os, x.annot);
            os << "). ";
            print_expr(os, x.body);
            os << ")";
          },
          [&](const AppE& x) {
            os << "(";
            print_expr(os, x.fn);
            os << " ";
            print_expr(os, x.arg);
            os << ")";
          },
          [&](const FixE& x) {
            os << "(fix(" << x.name << ": ";
            print_type(os, x.annot);
            os << "). ";
            print_expr(os, x.body);
            os << ")";
          },
          [&](const LetE& x) {
            os << "(let " << x.name << " = ";
            print_expr(os, x.bound);
            os << " in ";
            print_expr(os, x.body);
            os << ")";
          },
          [&](const RecordE& x) {
            os << "{";
            bool first = true;
            for (const auto& [l, f] : x.fields) {
              if (!first) os << ", ";
              first = false;
              os << l << ": ";
              print_expr(os, f);
            }
            os << "}";
          },
          [&](const ProjectE& x) {
            print_expr(os, x.value);
            os << "." << x.label;
          },
          [&](const InjectE& x) {
            os << "(inject ";
            print_expr(os, x.value);
            os << " at " << x.label << ")";
          },
          [&](const CaseE& x) {
            os << "(case ";
            print_expr(os, x.scrutinee);
            os << " {";
            bool first = true;
            for (const auto& arm : x.arms) {
              if (!first) os << " | ";
              first = false;
              os << arm.label << "(" << arm.binder << ") => ";
              print_expr(os, arm.body);
            }
            os << "})";
          },
          [&](const FoldE& x) {
            os << "(fold ";
            print_expr(os, x.value);
            os << ")";
          },
          [&](const UnfoldE& x) {
            os << "(unfold ";
            print_expr(os, x.value);
            os << ")";
          },
          [&](const TyLambdaE& x) {
            os << "(/\\" << x.var << ". ";
            print_expr(os, x.body);
            os << ")";
          },
          [&](const TyAppE& x) {
            print_expr(os, x.fn);
            os << "[";
            print_type(os, x.arg);
            os << "]";
          },
          [&](const PackE& x) {
            os << "(pack ";
            print_expr(os, x.value);
            os << " as ";
            print_type(os, x.annot);
            os << ")";
          },
          [&](const UnpackE& x) {
            os << "(unpack (" << x.binder << ", " << x.tyvar << ") = ";
            print_expr(os, x.packed);
            os << " in ";
            print_expr(os, x.body);
            os << ")";
          },
          [&](const BoolE& x) { os << (x.value ? "true" : "false"); },
          [&](const IfE& x) {
            os << "(if ";
            print_expr(os, x.cond);
            os << " then ";
            print_expr(os, x.then_branch);
            os << " else ";
            print_expr(os, x.else_branch);
            os << ")";
          },
          [&](const PrimE& x) {
            os << "(" << prim_name_str(x.name);
            for (const auto& a : x.args) {
              os << " ";
              print_expr(os, a);
            }
            os << ")";
          },
          [&](const TplE& x) {
            os << "(" << tpl_kind_str(x.kind) << " ";
            print_template(os, x.body);
            os << ")";
          },
      },
      e.node());
}

}  // namespace

std::string type_to_string(const Type& t) {
  std::ostringstream os;
  print_type(os, t);
  return os.str();
}

std::string expr_to_string(const Expr& e) {
  std::ostringstream os;
  print_expr(os, e);
  return os.str();
}

}  // namespace doccalc::kernel
