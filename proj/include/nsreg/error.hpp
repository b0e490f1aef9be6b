#ifndef NSREG_ERROR_HPP
#define NSREG_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nsreg {

/// Base of every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidGrid : public Error {
public:
    using Error::Error;
};

/// Conjugate symmetry broken, or component sizes inconsistent with the grid.
class MalformedField : public Error {
public:
    using Error::Error;
};

class OutOfBand : public Error {
public:
    using Error::Error;
};

/// A negative power of A was requested on a field that carries a k = 0 amplitude.
class SingularMode : public Error {
public:
    using Error::Error;
};

class InvalidExponent : public Error {
public:
    using Error::Error;
};

class InvalidOrder : public Error {
public:
    using Error::Error;
};

class UndefinedRatio : public Error {
public:
    using Error::Error;
};

class NotAVorticity : public Error {
public:
    using Error::Error;
};

class InvalidScaling : public Error {
public:
    using Error::Error;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

/// Time step exceeds the CFL guard. Carries the largest admissible step.
class StepRejected : public Error {
public:
    StepRejected(const std::string& what, double admissible_dt)
        : Error(what), admissible_dt_(admissible_dt) {}
    double admissible_dt() const noexcept { return admissible_dt_; }

private:
    double admissible_dt_;
};

/// Malformed input file. offset is the byte (or line, for text formats) where parsing failed.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

} // namespace nsreg

#endif
