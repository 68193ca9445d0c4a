#pragma once

#include <stdexcept>
#include <string>

namespace oremul {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define OREMUL_DEFINE_ERROR(Name)              \
  class Name : public Error {                  \
   public:                                     \
    explicit Name(const std::string& what)     \
        : Error(std::string(#Name ": ") + what) {} \
  };

OREMUL_DEFINE_ERROR(ZeroInverse)
OREMUL_DEFINE_ERROR(CharacteristicTooSmall)
OREMUL_DEFINE_ERROR(ZeroCharacteristic)
OREMUL_DEFINE_ERROR(DomainMismatch)
OREMUL_DEFINE_ERROR(DimensionMismatch)
OREMUL_DEFINE_ERROR(TagMismatch)
OREMUL_DEFINE_ERROR(InconsistentBand)
OREMUL_DEFINE_ERROR(WindowTooSmall)
OREMUL_DEFINE_ERROR(NotLowerTriangular)
OREMUL_DEFINE_ERROR(InvalidDomain)
OREMUL_DEFINE_ERROR(UnknownAlgorithm)
OREMUL_DEFINE_ERROR(InvalidConfig)
OREMUL_DEFINE_ERROR(FormatError)

#undef OREMUL_DEFINE_ERROR

}  // namespace oremul
