#pragma once

#include <stdexcept>
#include <string>

namespace longmem {

// Bad user-supplied data or configuration (CSV rows, column names,
// out-of-range knobs). The CLI maps this to exit code 2.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation produced something unusable (nonpositive variance,
// degenerate regressor matrix, overflow). Exit code 3.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace longmem
