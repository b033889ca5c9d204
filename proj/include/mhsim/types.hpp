#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mhsim {

using NodeId = std::uint32_t;
using LinkId = std::uint32_t;

// Demand value meaning "no rate cap" for a client.
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

// Base class for every error raised by the library. Subclasses name the
// failure category so callers can react to one kind without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class StructuralError : public Error {
 public:
  using Error::Error;
};

class SamplingError : public Error {
 public:
  using Error::Error;
};

class InfeasibleStrategyError : public Error {
 public:
  using Error::Error;
};

// Outgoing ISP vector: entry i is the ISP index used for client i.
// Serialized as letters, ISP 0 = 'A'.
class Strategy {
 public:
  Strategy() = default;
  explicit Strategy(std::vector<std::uint8_t> assignment)
      : assignment_(std::move(assignment)) {}

  static Strategy parse(std::string_view letters);
  static Strategy parse(std::string_view letters, std::size_t num_isps,
                        std::size_t num_clients);

  std::size_t size() const { return assignment_.size(); }
  std::size_t operator[](std::size_t client) const {
    return assignment_[client];
  }
  const std::vector<std::uint8_t>& assignment() const { return assignment_; }
  std::vector<std::uint8_t>& assignment() { return assignment_; }

  std::string to_string() const;

  friend bool operator==(const Strategy&, const Strategy&) = default;
  friend auto operator<=>(const Strategy&, const Strategy&) = default;

 private:
  std::vector<std::uint8_t> assignment_;
};

// Round-balanced vector: client i gets ISP floor(i * F / C).
// (A,A,B,B,C) for 3 ISPs and 5 clients.
Strategy balanced_strategy(std::size_t num_isps, std::size_t num_clients);

}  // namespace mhsim
