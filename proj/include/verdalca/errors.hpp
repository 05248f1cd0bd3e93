#pragma once

#include <stdexcept>
#include <string>

namespace verdalca {

/// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: malformed documents, invalid values, unknown ids. The CLI maps
/// these to exit code 2 and the service to 4xx.
class InputError : public Error {
public:
    using Error::Error;
};

class ParseError : public InputError {
public:
    using InputError::InputError;
};

class ValidationError : public InputError {
public:
    using InputError::InputError;
};

class DuplicateIdError : public InputError {
public:
    explicit DuplicateIdError(std::string id)
        : InputError("duplicate id \"" + id + "\""), id_(std::move(id)) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

/// A reference to an id that does not exist (database, scenario, override path).
class ReferenceError : public InputError {
public:
    ReferenceError(std::string id, const std::string& context)
        : InputError("dangling reference \"" + id + "\"" +
                     (context.empty() ? std::string{} : " in " + context)),
          id_(std::move(id)) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class UnknownCategoryError : public InputError {
public:
    explicit UnknownCategoryError(const std::string& key)
        : InputError("unknown impact category \"" + key + "\"") {}
};

/// Computation failed on valid input (CLI exit code 1, service 500).
class ComputeError : public Error {
public:
    using Error::Error;
};

class SingularSystemError : public ComputeError {
public:
    SingularSystemError(const std::string& what, double condition_estimate)
        : ComputeError(what), condition_estimate_(condition_estimate) {}
    double condition_estimate() const noexcept { return condition_estimate_; }

private:
    double condition_estimate_;
};

}  // namespace verdalca
