#pragma once

#include <stdexcept>
#include <string>

namespace qfalab {

// Base for all library errors. Messages name the violated invariant and the
// offending magnitude.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotHermitian : Error {
    explicit NotHermitian(const std::string& msg) : Error(msg) {}
};

struct TraceNotOne : Error {
    explicit TraceNotOne(const std::string& msg) : Error(msg) {}
};

struct NotPSD : Error {
    explicit NotPSD(const std::string& msg) : Error(msg) {}
};

struct NotADistribution : Error {
    explicit NotADistribution(const std::string& msg) : Error(msg) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

struct NotReversible : Error {
    explicit NotReversible(const std::string& msg) : Error(msg) {}
};

struct TooLarge : Error {
    explicit TooLarge(const std::string& msg) : Error(msg) {}
};

struct IncompleteObservableTable : Error {
    explicit IncompleteObservableTable(const std::string& msg) : Error(msg) {}
};

struct NotOrthogonalFamily : Error {
    explicit NotOrthogonalFamily(const std::string& msg) : Error(msg) {}
};

struct ReconstructionMismatch : Error {
    explicit ReconstructionMismatch(const std::string& msg) : Error(msg) {}
};

struct BadConfig : Error {
    explicit BadConfig(const std::string& msg) : Error(msg) {}
};

}  // namespace qfalab
