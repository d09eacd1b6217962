#pragma once
#include <stdexcept>
#include <string>

namespace vcsim {

// value does not fit its declared bitwidth / signedness
struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// mismatched lengths or tile counts
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// bad accelerator / slice / cost configuration
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& field, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) +
                           (field.empty() ? "" : " field '" + field + "'") + ": " + msg),
        line(line), field(field) {}
  int line;
  std::string field;
};

// something that "can't happen" did
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace vcsim
