#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace doccalc::kernel {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

struct TypeNode;

// Immutable type term with cheap copies (shared nodes). Equality is
// alpha-equivalence; record/sum labels compare as sets.
class Type {
 public:
  static Type str();
  static Type boolean();
  static Type arrow(Type param, Type result);
  static Type record(std::vector<std::pair<std::string, Type>> fields);
  static Type sum(std::vector<std::pair<std::string, Type>> variants);
  static Type forall(std::string var, Type body);
  static Type mu(std::string var, Type body);
  static Type exists(std::string var, Type body);
  static Type var(std::string name);

  const TypeNode& node() const { return *node_; }

  friend bool operator==(const Type& a, const Type& b);
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }

 private:
  explicit Type(std::shared_ptr<const TypeNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const TypeNode> node_;
};

struct StrTy {};
struct BoolTy {};
struct ArrowTy {
  Type param;
  Type result;
};
struct RecordTy {
  std::vector<std::pair<std::string, Type>> fields;
};
struct SumTy {
  std::vector<std::pair<std::string, Type>> variants;
};
struct ForallTy {
  std::string var;
  Type body;
};
struct MuTy {
  std::string var;
  Type body;
};
struct ExistsTy {
  std::string var;
  Type body;
};
struct TyVar {
  std::string name;
};

struct TypeNode : std::variant<StrTy, BoolTy, ArrowTy, RecordTy, SumTy,
                               ForallTy, MuTy, ExistsTy, TyVar> {
  using variant::variant;
};

bool type_equal(const Type& a, const Type& b);

// Free type variables, in first-occurrence order.
std::vector<std::string> free_type_vars(const Type& t);

// Capture-avoiding substitution of `name := replacement` in `t`.
Type subst_type(const Type& t, const std::string& name, const Type& replacement);

std::string type_to_string(const Type& t);

// ---------------------------------------------------------------------------
// Expressions and templates
// ---------------------------------------------------------------------------

struct ExprNode;
struct Template;
struct CaseArm;

enum class PrimName { Map, Flatten, Append, Join, Rev, StrEq };

const char* prim_name_str(PrimName p);
std::optional<PrimName> prim_name_parse(const std::string& s);

enum class TplKind { StrTpl, TreeTpl, FragTpl, FlowTpl, ReactTpl };

const char* tpl_kind_str(TplKind k);

class Expr {
 public:
  static Expr str_lit(std::string value);
  static Expr concat(Expr lhs, Expr rhs);
  static Expr var(std::string name);
  static Expr lambda(std::string param, Type annot, Expr body);
  static Expr app(Expr fn, Expr arg);
  static Expr fix(std::string name, Type annot, Expr body);
  static Expr let_in(std::string name, Expr bound, Expr body);
  static Expr record(std::vector<std::pair<std::string, Expr>> fields);
  static Expr project(Expr value, std::string label);
  static Expr inject(Expr value, std::string label, Type sum_annot);
  static Expr case_of(Expr scrutinee, std::vector<CaseArm> arms);
  static Expr fold(Type mu_annot, Expr value);
  static Expr unfold(Type mu_annot, Expr value);
  static Expr ty_lambda(std::string var, Expr body);
  static Expr ty_app(Expr fn, Type arg);
  static Expr pack(Expr value, Type witness, Type exists_annot);
  static Expr unpack(std::string binder, std::string tyvar, Expr packed, Expr body);
  static Expr bool_lit(bool value);
  static Expr if_then_else(Expr cond, Expr then_branch, Expr else_branch);
  static Expr prim(PrimName name, std::vector<Type> tyargs, std::vector<Expr> args);
  static Expr tpl(TplKind kind, Template t);

  const ExprNode& node() const { return *node_; }

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

// --- template grammar -------------------------------------------------------

struct TemplatePart;

struct Template {
  std::vector<TemplatePart> parts;
};

struct LitPart {
  std::string value;
};
struct ExprPart {
  Expr expr;
};
struct SetPart {
  std::string name;
  Expr expr;
};
struct NodeAttr {
  std::string key;
  Expr value;
};
struct IfPart {
  Expr cond;
  Template then_parts;
  Template else_parts;
};
struct ForeachPart {
  Expr source;
  std::string binder;
  Template body;
};
struct NodePart {
  std::string name;
  std::vector<NodeAttr> attrs;
  Template children;
};
struct SplicePart {
  Expr expr;
};
struct ComponentPart {
  Expr component;
  Expr props;
};

struct TemplatePart
    : std::variant<LitPart, ExprPart, SetPart, IfPart, ForeachPart, NodePart,
                   SplicePart, ComponentPart> {
  using variant::variant;
};

bool operator==(const Template& a, const Template& b);
inline bool operator!=(const Template& a, const Template& b) { return !(a == b); }
bool operator==(const TemplatePart& a, const TemplatePart& b);

// --- expression nodes -------------------------------------------------------

struct CaseArm {
  std::string label;
  std::string binder;
  Expr body;
};

struct StrLit {
  std::string value;
};
struct ConcatE {
  Expr lhs;
  Expr rhs;
};
struct VarE {
  std::string name;
};
struct LambdaE {
  std::string param;
  Type annot;
  Expr body;
};
struct AppE {
  Expr fn;
  Expr arg;
};
struct FixE {
  std::string name;
  Type annot;
  Expr body;
};
struct LetE {
  std::string name;
  Expr bound;
  Expr body;
};
struct RecordE {
  std::vector<std::pair<std::string, Expr>> fields;
};
struct ProjectE {
  Expr value;
  std::string label;
};
struct InjectE {
  Expr value;
  std::string label;
  Type annot;  // the full sum type
};
struct CaseE {
  Expr scrutinee;
  std::vector<CaseArm> arms;
};
struct FoldE {
  Type annot;  // the mu type
  Expr value;
};
struct UnfoldE {
  Type annot;  // the mu type
  Expr value;
};
struct TyLambdaE {
  std::string var;
  Expr body;
};
struct TyAppE {
  Expr fn;
  Type arg;
};
struct PackE {
  Expr value;
  Type witness;
  Type annot;  // the existential type
};
struct UnpackE {
  std::string binder;
  std::string tyvar;
  Expr packed;
  Expr body;
};
struct BoolE {
  bool value;
};
struct IfE {
  Expr cond;
  Expr then_branch;
  Expr else_branch;
};
struct PrimE {
  PrimName name;
  std::vector<Type> tyargs;
  std::vector<Expr> args;
};
struct TplE {
  TplKind kind;
  Template body;
};

struct ExprNode
    : std::variant<StrLit, ConcatE, VarE, LambdaE, AppE, FixE, LetE, RecordE,
                   ProjectE, InjectE, CaseE, FoldE, UnfoldE, TyLambdaE, TyAppE,
                   PackE, UnpackE, BoolE, IfE, PrimE, TplE> {
  using variant::variant;
};

// Free term variables, in first-occurrence order.
std::vector<std::string> free_vars(const Expr& e);

// True when `e` contains any template expression or part.
bool contains_template(const Expr& e);

std::string expr_to_string(const Expr& e);

}  // namespace doccalc::kernel
