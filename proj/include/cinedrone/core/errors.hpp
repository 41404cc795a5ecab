#pragma once

#include <stdexcept>
#include <string>

namespace cinedrone {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Carries the JSON pointer of the offending node, e.g. "/shots/2/shot_type".
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class NoPathError : public Error {
 public:
  using Error::Error;
};

class StaleTargetError : public Error {
 public:
  using Error::Error;
};

class StaleStateError : public Error {
 public:
  using Error::Error;
};

class SingularError : public Error {
 public:
  using Error::Error;
};

}  // namespace cinedrone
