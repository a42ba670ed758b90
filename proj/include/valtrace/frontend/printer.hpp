#pragma once

#include <string>

#include "valtrace/frontend/ast.hpp"

namespace valtrace {

/// Renders an AST back to SL source. Compound expressions are fully
/// parenthesized, so parse(print(p)) is structurally equal to p. Observe
/// wrappers are printed transparently.
std::string print_program(const Program& program);

std::string print_expression(const AstNode& expr);

/// Float formatting shared by the printer and value display: shortest
/// round-trip digits, always containing '.', 'e', or a non-finite word.
std::string format_float(double value);

}  // namespace valtrace
