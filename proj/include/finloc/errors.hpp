#pragma once

#include <stdexcept>
#include <string>

namespace finloc {

// Base class for all precondition violations raised by this library.
// Law *failures* are not errors: they are reported as LawReport entries.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class SizeExceeded : public Error {
 public:
  explicit SizeExceeded(const std::string& what) : Error(what) {}
};

class CrossFrame : public Error {
 public:
  explicit CrossFrame(const std::string& what) : Error(what) {}
};

class OutOfRange : public Error {
 public:
  explicit OutOfRange(const std::string& what) : Error(what) {}
};

class NotAFrame : public Error {
 public:
  explicit NotAFrame(const std::string& what) : Error(what) {}
};

// A claimed frame homomorphism fails one of its laws; carries a witness.
class NotAFrameHom : public Error {
 public:
  explicit NotAFrameHom(const std::string& what) : Error(what) {}
};

class NotBLocale : public Error {
 public:
  explicit NotBLocale(const std::string& what) : Error(what) {}
};

class NotOpen : public Error {
 public:
  explicit NotOpen(const std::string& what) : Error(what) {}
};

class NotEtale : public Error {
 public:
  explicit NotEtale(const std::string& what) : Error(what) {}
};

class NotSupported : public Error {
 public:
  explicit NotSupported(const std::string& what) : Error(what) {}
};

class NotAHom : public Error {
 public:
  explicit NotAHom(const std::string& what) : Error(what) {}
};

class NotSheafHom : public Error {
 public:
  explicit NotSheafHom(const std::string& what) : Error(what) {}
};

class NoBasis : public Error {
 public:
  explicit NoBasis(const std::string& what) : Error(what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

class ArrowLawViolation : public Error {
 public:
  explicit ArrowLawViolation(const std::string& what) : Error(what) {}
};

class NotProjection : public Error {
 public:
  explicit NotProjection(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace finloc
