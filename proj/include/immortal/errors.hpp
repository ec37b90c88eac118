#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace immortal
{

/// Malformed input text; carries the 1-based line number.
class ParseError : public std::runtime_error
{
public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line)
  {
  }

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// Input parses but is inconsistent (frame ordering, frame ranges).
class ConsistencyError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace immortal
