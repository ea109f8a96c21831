#pragma once

// Map expressions such as "(z^2-a)/(z^2+a)" or "c*(z + 1/z)".
//
// Grammar, loosest to tightest: + -, * /, unary -, ^ (right-associative,
// nonnegative integer literal exponent). `i` is the imaginary unit, `z` the
// variable, any other identifier a parameter. `3i` and `3/2i` are the
// literals 3i and (3/2)i; decimals like 0.25 are exact.

#include "deckmap/algebra.hpp"
#include "deckmap/ratmap.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace deckmap {

struct ExprNode {
    enum class Kind { Variable, Literal, Parameter, Add, Sub, Mul, Div, Pow, Neg };

    Kind kind = Kind::Literal;
    GaussianRational value;
    std::string name;
    std::size_t exponent = 0;
    std::size_t position = 0;
    std::vector<std::shared_ptr<const ExprNode>> children;
};

using ParamBindings = std::map<std::string, GaussianRational>;

class MapExpression {
public:
    /// Throws ParseError with the byte offset of the offending token.
    static MapExpression parse(const std::string& source);

    const ExprNode& root() const { return *root_; }
    const std::string& source() const { return source_; }
    std::set<std::string> parameters() const;

    /// Exact evaluation; throws UnboundParameter or InvalidArgument (zero denominator).
    RationalMap evaluate(const ParamBindings& params = {}) const;

private:
    std::shared_ptr<const ExprNode> root_;
    std::string source_;
};

RationalMap parse_map(const std::string& source, const ParamBindings& params = {});

/// Parses "name=value" with value a Gaussian-rational expression.
std::pair<std::string, GaussianRational> parse_binding(const std::string& text);

} // namespace deckmap
