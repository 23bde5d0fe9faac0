#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "findmy/term.hpp"

namespace findmy {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Canonical text form: names print bare, fresh names as ~label.id,
/// applications as f(a,b), pairs as <a,b>. No whitespace is emitted.
std::string render(const Term& t);

/// Inverse of render(). Whitespace between tokens is ignored; a fresh name
/// written without ".id" gets id 0.
Term parse_term(std::string_view text);

}  // namespace findmy
