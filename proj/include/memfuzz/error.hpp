#pragma once

#include <stdexcept>
#include <string>

namespace memfuzz {

// Base for every error raised by the library. The CLI maps all of these to
// exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (bad index,
// out-of-range state, invalid parameter combination).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed sampled data, e.g. non-increasing waveform timestamps.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Requested sample spacing too coarse for the waveform being built.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

// Configuration problem. key() names the offending JSON key ("device.r_on_ohm").
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace memfuzz
