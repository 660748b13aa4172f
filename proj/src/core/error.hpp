#pragma once

#include <stdexcept>
#include <string>

namespace smoothwalk {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on object state was violated (wrong phase, mismatched
// corpus, diverged training, ...).
class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace smoothwalk
