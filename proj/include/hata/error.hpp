#ifndef HATA_ERROR_HPP
#define HATA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace hata {

inline constexpr const char* kVersion = "0.1.0";

/// Invalid parameters (inadmissible alpha, h <= 1, out-of-range counts).
class ConfigError : public std::invalid_argument {
public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical method failed its own accuracy contract.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hata

#endif // HATA_ERROR_HPP
