#pragma once

#include <stdexcept>
#include <string>

namespace sampro {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent user input (domains, basis specs, configs).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A basis is rank-deficient on the given candidate grid.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// A measure or multiset fails to induce a norm on the space.
class SingularMeasure : public Error {
 public:
  using Error::Error;
};

}  // namespace sampro
