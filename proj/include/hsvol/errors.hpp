#pragma once

#include <stdexcept>

namespace hsvol {

// A file could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A file was read but its contents do not parse.
class MalformedInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hsvol
