#pragma once

#include <stdexcept>
#include <string>

namespace qmv {

/// Base class for every validation or precondition failure raised by qmv.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SizeMismatch : Error { using Error::Error; };
struct NonPositiveCount : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct MessageNotInM : Error { using Error::Error; };
struct NotBalanced : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct Infeasible : Error { using Error::Error; };
struct PreconditionViolated : Error { using Error::Error; };

struct BudgetExceeded : Error {
    BudgetExceeded(const std::string& msg, long long required_pairs, long long budget_pairs)
        : Error(msg), required(required_pairs), budget(budget_pairs) {}
    long long required;
    long long budget;
};

/// Raised only if the balanced-cover bound fails during witness replay.
/// This path is unreachable unless the certified bound itself is false,
/// so it must never be swallowed.
struct CoverBoundBreach : Error { using Error::Error; };

}  // namespace qmv
