#pragma once

#include <stdexcept>
#include <string>

namespace stbuchi {

/// A configured cap (DNF size, reachable states, search nodes) was exceeded.
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InadmissibleDisjunct : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A finite tree model that violates its structural contract, typically read
/// from a corrupted witness file.
class MalformedModel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(int line, int column, const std::string& message)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace stbuchi
