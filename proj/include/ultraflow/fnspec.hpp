#pragma once

#include <memory>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "ultraflow/params.hpp"

namespace ultraflow {

/// A small expression language for functions of z on [-1,1].
///
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := ('+' | '-') unary | power
///   power  := atom ('^' ['+' | '-'] number)?
///   atom   := number | 'z' | 'n' | '(' expr ')'
///           | 'exp' '(' expr ')' | 'abs' '(' expr ')'
///           | 'const' '(' number ')' | 'fab' '(' number ',' number ')'
///
/// fab(a, b) is a |1 - b z|^{-(n-2)/2}, with n supplied at evaluation.
/// Exponents are literals. Parsing errors raise ParseError with the offset.
class FnSpec {
 public:
  static FnSpec parse(std::string_view text);

  double operator()(double z, double n) const;
  GridFn sample(const Eigen::VectorXd& z, double n) const;
  const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace ultraflow
