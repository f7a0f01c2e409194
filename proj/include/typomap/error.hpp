#pragma once

#include <stdexcept>
#include <string>

namespace typomap {

// All recoverable failures surface as this type; the CLI maps it to a
// nonzero exit and a one-line message.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace typomap
