#pragma once

#include <stdexcept>
#include <string>

namespace hbeq {

enum class ErrorKind {
    invalid_param,
    degenerate,
    singular_matrix,
    invalid_perturbation,
    not_symmetric,
    invalid_mute,
    wrong_dimension,
    zero_variance,
    parse_error,
};

/// Base for every failure raised by the library. `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class InvalidParam : public Error {
public:
    InvalidParam(std::string name, std::string reason)
        : Error(ErrorKind::invalid_param, "invalid parameter '" + name + "': " + reason),
          name_(std::move(name)), reason_(std::move(reason)) {}
    const std::string& name() const noexcept { return name_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string name_;
    std::string reason_;
};

class Degenerate : public Error {
public:
    explicit Degenerate(const std::string& what) : Error(ErrorKind::degenerate, "degenerate: " + what) {}
};

class SingularMatrix : public Error {
public:
    SingularMatrix(std::string which, double condition)
        : Error(ErrorKind::singular_matrix,
                "singular matrix '" + which + "' (condition number " + std::to_string(condition) + ")"),
          which_(std::move(which)) {}
    const std::string& which() const noexcept { return which_; }

private:
    std::string which_;
};

class InvalidPerturbation : public Error {
public:
    explicit InvalidPerturbation(const std::string& what)
        : Error(ErrorKind::invalid_perturbation, "invalid perturbation: " + what) {}
};

class NotSymmetric : public Error {
public:
    explicit NotSymmetric(double asymmetry)
        : Error(ErrorKind::not_symmetric, "matrix not symmetric (max |m - m'| = " + std::to_string(asymmetry) + ")") {}
};

class InvalidMute : public Error {
public:
    explicit InvalidMute(const std::string& what) : Error(ErrorKind::invalid_mute, "invalid mute set: " + what) {}
};

class WrongDimension : public Error {
public:
    explicit WrongDimension(const std::string& what) : Error(ErrorKind::wrong_dimension, "wrong dimension: " + what) {}
};

class ZeroVariance : public Error {
public:
    explicit ZeroVariance(const std::string& what) : Error(ErrorKind::zero_variance, "zero variance: " + what) {}
};

class ParseError : public Error {
public:
    ParseError(int line, std::string key, const std::string& reason)
        : Error(ErrorKind::parse_error,
                "parse error at line " + std::to_string(line) + (key.empty() ? "" : " (key '" + key + "')") + ": " + reason),
          line_(line), key_(std::move(key)) {}
    int line() const noexcept { return line_; }
    const std::string& key() const noexcept { return key_; }

private:
    int line_;
    std::string key_;
};

}  // namespace hbeq
