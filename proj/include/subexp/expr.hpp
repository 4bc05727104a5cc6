#pragma once

#include <string>

#include "subexp/errors.hpp"
#include "subexp/function.hpp"

namespace subexp {

/// Raised on malformed function specs; carries the offending position.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t pos)
        : InputError(what + " (at position " + std::to_string(pos) + ")"), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

/// Compiles a function spec into a TestFunction of the given arity.
///
/// A spec is either the name of a built-in statistic (max, min, mean,
/// median, each a function of all `arity` coordinates) or an arithmetic
/// expression over variables x1..xn, numeric constants, the operators
/// + - * /, unary minus, and the calls min(a,b,...), max(a,b,...),
/// abs(e), sin(e), cos(e), exp(e).
///
/// Expression-built functions carry no Lipschitz constant; built-ins do.
TestFunction parse_function(const std::string& spec, int arity);

} // namespace subexp
