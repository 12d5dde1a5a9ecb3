// Exception types shared across the toolkit.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace entkit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonHermitian : public Error { public: using Error::Error; };
class NotAntisymmetric : public Error { public: using Error::Error; };
class NotSymmetric : public Error { public: using Error::Error; };
class NotPpt : public Error { public: using Error::Error; };
class NotInRange : public Error { public: using Error::Error; };
class DimensionOutOfScope : public Error { public: using Error::Error; };
class DimensionCap : public Error { public: using Error::Error; };
class NumericallyIllConditioned : public Error { public: using Error::Error; };
class EdgePreconditionFailed : public Error { public: using Error::Error; };
class NonDetecting : public Error { public: using Error::Error; };
class ProductStateInput : public Error { public: using Error::Error; };
class SingularFrame : public Error { public: using Error::Error; };
class WrongModeCount : public Error { public: using Error::Error; };
class NotAState : public Error { public: using Error::Error; };
class UnknownFamily : public Error { public: using Error::Error; };
class InvariantViolation : public Error { public: using Error::Error; };

// Parse failures carry the file position that triggered them.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ")"),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace entkit
