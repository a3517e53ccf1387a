#pragma once

#include <stdexcept>
#include <string>

namespace kptau {

struct KpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeError : KpError { using KpError::KpError; };
struct RankError : KpError { using KpError::KpError; };
struct BackendUnsupported : KpError { using KpError::KpError; };
struct EigenvalueCollision : KpError { using KpError::KpError; };
struct DegenerateK : KpError { using KpError::KpError; };
struct SingularAtOrigin : KpError { using KpError::KpError; };
struct ShiftDomainError : KpError { using KpError::KpError; };
struct ZeroTau : KpError { using KpError::KpError; };
struct BoxError : KpError { using KpError::KpError; };
struct DegenerateVandermonde : KpError { using KpError::KpError; };
struct ConfigError : KpError { using KpError::KpError; };

}  // namespace kptau
