/**
 * @file rhs_expr.hpp
 * @brief Arithmetic expressions in t and x for user-defined right-hand sides.
 *
 * Grammar, loosest to tightest: + -, * /, unary -, ^ (right-associative),
 * then numbers, t, x, parentheses and calls exp sin cos sqrt pow gamma abs.
 */
#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tfode/problem.hpp"

namespace tfode {

struct Span {
  std::size_t offset = 0;
  std::size_t length = 0;
};

enum class ExprKind { constant, variable, unary, binary, call };
enum class ExprVar { t, x };
enum class ExprFunc { exp, sin, cos, sqrt, pow, gamma, abs };

struct ExprNode {
  ExprKind kind = ExprKind::constant;
  double value = 0.0;      ///< constant
  ExprVar var = ExprVar::t;  ///< variable
  char op = 0;             ///< unary '-' or binary + - * / ^
  ExprFunc func = ExprFunc::exp;  ///< call
  std::vector<std::shared_ptr<const ExprNode>> children;
  Span span;
  int height = 0;  ///< edges on the longest path to a leaf
};

/// Immutable parsed expression. Cheap to copy; safe to share.
class ExprAst {
 public:
  ExprAst() = default;
  ExprAst(std::shared_ptr<const ExprNode> root, std::string source)
      : root_(std::move(root)), source_(std::move(source)) {}

  [[nodiscard]] const ExprNode& root() const { return *root_; }
  [[nodiscard]] const std::string& source() const noexcept { return source_; }
  [[nodiscard]] bool empty() const noexcept { return !root_; }

  /// Tree height in edges: a lone leaf has depth 0.
  [[nodiscard]] int depth() const { return root_ ? root_->height : 0; }

 private:
  std::shared_ptr<const ExprNode> root_;
  std::string source_;
};

/// Maximum tree height accepted by parse().
inline constexpr int kMaxExprDepth = 512;

/// Throws ParseError with the byte offset of the problem.
[[nodiscard]] ExprAst parse_expr(std::string_view src);

/// Throws DomainError carrying the offending node's span (sqrt of a
/// negative, gamma pole, 0 to a negative power, fractional power of a
/// negative, or any other non-finite result).
[[nodiscard]] double evaluate(const ExprAst& ast, double t, double x);

/// Fully parenthesized rendering that parses back to an equal tree.
[[nodiscard]] std::string pretty_print(const ExprAst& ast);

/// Tree equality ignoring source spans.
[[nodiscard]] bool structurally_equal(const ExprAst& a, const ExprAst& b);

/// Wraps an expression as a right-hand side f(t, x).
[[nodiscard]] Rhs make_rhs(ExprAst ast);

}  // namespace tfode
