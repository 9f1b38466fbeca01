#include "polyshannon/errors.hpp"

namespace polyshannon {

ParseError::ParseError(const std::string& what, std::size_t offset)
    : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

}  // namespace polyshannon
