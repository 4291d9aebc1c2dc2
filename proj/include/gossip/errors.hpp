#pragma once

#include <stdexcept>
#include <string>

namespace gossip {

/// Malformed input text (grids, edge lists, partition and config files).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A region or graph that must be connected is not.
class ConnectivityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the operation's domain (vertex not in region, bad rates...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An environment without any free cell.
class EmptyEnvironmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoPathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A partition violates one of the connected-partition conditions.
class InvalidPartitionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gossip
