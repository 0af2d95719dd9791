#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace itt {

enum class Errc {
  MissingCell,
  MissingAtoms,
  BadSymop,
  BadNumber,
  MissingLattice,
  CountMismatch,
  TooManyAtoms,
  UnknownElement,
  EmptyCorpus,
  InsufficientElements,
  TooManyPoints,
  InvalidFiltration,
  TooLarge,
  EmptyCluster,
  SamePair,
  IoError,
  BadManifest,
  ShapeMismatch,
  InvalidArgument,
};

std::string_view errc_name(Errc code) noexcept;

// Every recoverable failure in the library is reported as an Error carrying a
// machine-checkable code; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace itt
