#pragma once

#include <stdexcept>
#include <string>

namespace subexp {

/// Violated precondition on user-supplied input (bad arity, empty sample,
/// malformed spec, ...). The CLI maps this to the usage/config exit code.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace subexp
