#include "sfhad/errors.hpp"

namespace sfhad {

IoError::IoError(const std::string& path, const std::string& what)
    : Error(what + ": " + path), path_(path) {}

} // namespace sfhad
