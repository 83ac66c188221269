#pragma once

#include <stdexcept>
#include <string>

namespace shrinkparc {

/// Base class for all computation errors raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// File and serialization failures.
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

struct MixedSpace : Error {
    explicit MixedSpace(const std::string& msg) : Error(msg) {}
};

struct ZeroVarianceVoxel : Error {
    int voxel;
    explicit ZeroVarianceVoxel(int v)
        : Error("voxel " + std::to_string(v) + " has zero sample variance"), voxel(v) {}
};

struct OutOfRange : Error {
    explicit OutOfRange(const std::string& msg) : Error(msg) {}
};

struct LambdaOutOfRange : Error {
    explicit LambdaOutOfRange(const std::string& msg) : Error(msg) {}
};

struct UnpairedSubject : Error {
    explicit UnpairedSubject(const std::string& msg) : Error(msg) {}
};

struct TooFewSubjects : Error {
    explicit TooFewSubjects(const std::string& msg) : Error(msg) {}
};

struct MissingReplicate : Error {
    explicit MissingReplicate(const std::string& msg) : Error(msg) {}
};

struct AllZeroDifferences : Error {
    explicit AllZeroDifferences(const std::string& msg) : Error(msg) {}
};

struct NonpositiveTheta : Error {
    explicit NonpositiveTheta(const std::string& msg) : Error(msg) {}
};

struct InsufficientLength : Error {
    explicit InsufficientLength(const std::string& msg) : Error(msg) {}
};

struct DegenerateAffinity : Error {
    explicit DegenerateAffinity(const std::string& msg) : Error(msg) {}
};

struct EigensolverFailure : Error {
    explicit EigensolverFailure(const std::string& msg) : Error(msg) {}
};

struct EmptySubset : Error {
    explicit EmptySubset(const std::string& msg) : Error(msg) {}
};

struct EmptyInput : Error {
    explicit EmptyInput(const std::string& msg) : Error(msg) {}
};

struct ResampleLimitExceeded : Error {
    explicit ResampleLimitExceeded(const std::string& msg) : Error(msg) {}
};

struct FactorizationFailure : Error {
    explicit FactorizationFailure(const std::string& msg) : Error(msg) {}
};

struct UnequalSessionLengths : Error {
    explicit UnequalSessionLengths(const std::string& msg) : Error(msg) {}
};

struct TooShort : Error {
    explicit TooShort(const std::string& msg) : Error(msg) {}
};

struct InvalidInput : Error {
    explicit InvalidInput(const std::string& msg) : Error(msg) {}
};

}  // namespace shrinkparc
