#ifndef BPT_ERRORS_HPP
#define BPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bpt {

// Malformed input file; `line` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal cross-check between two computation routes disagreed.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid scenario configuration; `field` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string field)
      : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace bpt

#endif  // BPT_ERRORS_HPP
