#ifndef DUNKL_EXPRESSION_HPP
#define DUNKL_EXPRESSION_HPP

#include <complex>
#include <functional>
#include <string>

namespace dunkl::expr {

using Complex = std::complex<double>;

/// Compiled complex expression in one real variable.
using Expression = std::function<Complex(double)>;

/// Parses arithmetic in a single variable (default name "t").
///   numbers, the variable, constants pi, e, i
///   binary + - * / ^ (right-assoc), unary -, parentheses
///   functions exp log sqrt sin cos tan sinh cosh tanh abs gamma
/// Throws std::invalid_argument with the offending position on malformed input.
Expression parse(const std::string& text, const std::string& variable = "t");

/// Parses a constant expression (no variable allowed).
Complex parse_constant(const std::string& text);

}  // namespace dunkl::expr

#endif  // DUNKL_EXPRESSION_HPP
