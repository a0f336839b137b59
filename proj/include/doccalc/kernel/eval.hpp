#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "doccalc/kernel/ast.hpp"

namespace doccalc::kernel {

enum class EvalErrorKind { StuckTerm, FuelExhausted };

struct EvalError : std::runtime_error {
  EvalErrorKind kind;

  EvalError(EvalErrorKind k, const std::string& message)
      : std::runtime_error(message), kind(k) {}
};

inline constexpr std::uint64_t kDefaultFuel = 1'000'000;

bool is_value(const Expr& e);

// Capture-avoiding substitution of a term / type into a term.
Expr subst(const Expr& e, const std::string& name, const Expr& value);
Expr subst_type_in_expr(const Expr& e, const std::string& tyvar, const Type& t);

// One left-to-right call-by-value reduction; nullopt when `e` is a value.
// Throws EvalError(StuckTerm) on non-values with no applicable rule.
std::optional<Expr> step(const Expr& e);

// Iterates step to a value, or throws EvalError(FuelExhausted).
Expr eval(const Expr& e, std::uint64_t fuel = kDefaultFuel);

}  // namespace doccalc::kernel
