#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace gaf {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateGrid : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };

struct ParseError : Error {
  std::size_t offset;
  std::string expected;
  ParseError(std::size_t off, std::string exp, const std::string& what)
      : Error(what), offset(off), expected(std::move(exp)) {}
};

struct DivisionByZero : Error {
  std::complex<double> at;
  DivisionByZero(std::complex<double> point, const std::string& what)
      : Error(what), at(point) {}
};

struct UnboundParameter : Error { using Error::Error; };
struct NotHolomorphic : Error { using Error::Error; };

struct AllocationLimit : Error { using Error::Error; };

struct NonContraction : Error { using Error::Error; };
struct SeedNotHolomorphic : Error { using Error::Error; };

struct NotExact : Error { using Error::Error; };
struct NotASolution : Error { using Error::Error; };
struct SingularKernel : Error { using Error::Error; };

struct CriticalPoint : Error { using Error::Error; };
struct BranchConflict : Error { using Error::Error; };
struct OutOfDomain : Error { using Error::Error; };
struct UnsupportedWeight : Error { using Error::Error; };
struct BranchMismatch : Error { using Error::Error; };

struct ConfigError : Error {
  std::string key;
  ConfigError(std::string key_path, const std::string& what)
      : Error(what), key(std::move(key_path)) {}
};

struct IoError : Error { using Error::Error; };

} // namespace gaf
