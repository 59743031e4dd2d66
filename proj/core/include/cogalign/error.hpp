#pragma once

#include <stdexcept>
#include <string>

namespace cogalign {

// Base class for all contract violations raised by the library. The CLI maps
// each subclass to a process exit code.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad flags, bad config file, unknown keys, indivisible counts. Exit 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A verification pass found disagreements. Exit 3.
class VerifyError : public Error {
 public:
  using Error::Error;
};

// Filesystem or network failure. Exit 4.
class IoError : public Error {
 public:
  using Error::Error;
};

// Scene element outside the canvas, degenerate geometry, internal generator
// bug. Exit 1.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace cogalign
