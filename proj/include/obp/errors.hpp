#pragma once

#include <stdexcept>
#include <string>

namespace obp {

// Base for every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed lists, overlapping profiles, bad indices.
class StructureError : public Error {
public:
    using Error::Error;
};

// Out-of-range numeric parameters (cost, means, player counts).
class ParameterError : public Error {
public:
    using Error::Error;
};

// Learner queried before it has seen every arm.
class StateError : public Error {
public:
    using Error::Error;
};

// Exhaustive enumeration would exceed its configured budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

// Trace file problems: parse failures and replay past the end.
class TraceError : public Error {
public:
    using Error::Error;
};

// Bound evaluators need strictly separated means.
class DegenerateGapError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace obp
