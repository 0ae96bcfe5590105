#pragma once

#include <stdexcept>
#include <string>

namespace gop {

// Input errors: malformed documents, bad arguments, bound overruns.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gop
