#pragma once

#include <stdexcept>
#include <string>

namespace tqd {

/// Base for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotHermitian : public Error {
public:
    using Error::Error;
};

class InvalidSubsystem : public Error {
public:
    using Error::Error;
};

/// A matrix claimed to be a density matrix fails trace, Hermiticity or positivity.
class InvalidState : public Error {
public:
    using Error::Error;
};

class NotXState : public Error {
public:
    using Error::Error;
};

/// X state whose |01> and |10> populations differ, outside the closed-form domain.
class ConditionViolated : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

} // namespace tqd
