#pragma once

#include <stdexcept>
#include <string>

namespace fbt {

// Error categories map 1:1 onto CLI exit codes (see pipeline.hpp).
// Malformed *data* never throws; it is reported through ParseOutcome.

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// A caller violated an operation's contract (wrong slice predicate,
// infeasible generator spec, ...).
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

// A pipeline stage was invoked before the stage it depends on.
class PrerequisiteError : public std::runtime_error {
public:
    explicit PrerequisiteError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fbt
