#pragma once

#include <stdexcept>
#include <string>

namespace kfsm {

// Base class for errors that correspond to documented domain failures
// (as opposed to programming errors, which use the std exception types).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

class NotAllowable : public DomainError {
public:
    explicit NotAllowable(const std::string& what) : DomainError("NotAllowable: " + what) {}
};

// The rotation orbit landed exactly on an address boundary at `step`.
class GoodSetViolation : public DomainError {
public:
    long step;
    explicit GoodSetViolation(long step_)
        : DomainError("GoodSetViolation: orbit hits an address boundary at step " + std::to_string(step_)),
          step(step_) {}
};

class FinitePrefixWord : public DomainError {
public:
    FinitePrefixWord() : DomainError("FinitePrefixWord: word has no period block") {}
};

class InvalidKappaPair : public DomainError {
public:
    explicit InvalidKappaPair(const std::string& what) : DomainError("InvalidKappaPair: " + what) {}
};

class InvalidMu : public DomainError {
public:
    explicit InvalidMu(const std::string& what) : DomainError("InvalidMu: " + what) {}
};

class InvalidMap : public DomainError {
public:
    explicit InvalidMap(const std::string& what) : DomainError("InvalidMap: " + what) {}
};

class NotPeriodic : public DomainError {
public:
    explicit NotPeriodic(const std::string& what) : DomainError("NotPeriodic: " + what) {}
};

class NotKfsm : public DomainError {
public:
    explicit NotKfsm(const std::string& what) : DomainError("NotKfsm: " + what) {}
};

class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error("InternalError: " + what) {}
};

} // namespace kfsm
