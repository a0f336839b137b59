#pragma once

#include <optional>
#include <string>
#include <vector>

#include "doccalc/kernel/ast.hpp"

// The assumed standard library: the encoded list type, pairs, and the
// document node types, together with term-level constructors for them.
namespace doccalc::kernel::stdlib {

// tau list = mu a. <nil: {} | cons: {hd: tau, tail: a}>
Type list_type(const Type& elem);
// (a, b) = {fst: a, snd: b}
Type pair_type(const Type& fst, const Type& snd);

Type node_ty();    // flattened document nodes
Type fnode_ty();   // fragment-children document nodes
Type node_frag();  // fnode fragment
Type instance_ty();
Type react_node();

// If `t` is (alpha-equal to) `elem list` for some elem, returns elem.
std::optional<Type> list_elem_type(const Type& t);

// Friendly names for the well-known types above; falls back to the
// structural syntax.
std::string type_display_name(const Type& t);

// fold/inject shorthand: label_{mu} e = fold_mu (inject e at label as body[var -> mu])
Expr make_variant(const Type& mu_type, const std::string& label, Expr payload);

Expr pair(Expr fst, Expr snd);

// list helpers over the encoded list type
Expr nil(const Type& elem);
Expr cons(const Type& elem, Expr head, Expr tail);
Expr list_from(const Type& elem, const std::vector<Expr>& items);

// Builds a literal list from closed values, checking each element against
// the element type; throws TypeError on a mismatch.
Expr from_literal(const Type& elem, const std::vector<Expr>& values);

// Decodes an encoded list *value* into its element values. Returns nullopt
// if the value is not a canonical list encoding.
std::optional<std::vector<Expr>> list_to_values(const Expr& value);

// node constructors for the three node-bearing types
Expr text_node(Expr text);                     // text_{NodeTy} s
Expr struct_node(Expr name, Expr attrs, Expr children);  // node_{NodeTy}
Expr text_react(Expr text);
Expr struct_react(Expr name, Expr attrs, Expr children);
Expr inst_react(Expr key, Expr props, const Type& props_ty);
Expr text_fnode(Expr text);
Expr struct_fnode(Expr name, Expr attrs, Expr children_frag);
Expr frag_base(Expr fnode);
Expr frag_children(Expr frag_list);

// attrs: (Str, Str) list built from (key, value-expression) pairs
Expr attr_list(const std::vector<std::pair<std::string, Expr>>& attrs);

// Library terms inlined by the desugarer. Both are closed and template-free.
//   elim_frags_term : NodeFrag -> NodeTy list
//   reforest_term   : NodeTy list -> NodeTy list -> NodeTy list
// `literal` keeps the paragraph emitted even when the accumulator is empty.
Expr elim_frags_term();
Expr reforest_term(bool literal);

}  // namespace doccalc::kernel::stdlib
