#pragma once

#include <stdexcept>
#include <string>

namespace vispath {

// Failure categories surfaced by the library. Each maps to one documented
// contract violation or runtime condition; tests match on the code.
enum class Err {
    MalformedHeader,
    UnsupportedMaxval,
    TruncatedData,
    IoFailure,
    KernelTooLarge,
    NonPositiveSigma,
    ImageTooSmall,
    BadThresholds,
    StartGoalDisparityMismatch,
    BadRadii,
    NotFound,
    Ambiguous,
    GoalNotFound,
    DimensionMismatch,
    BadWindow,
    ZeroDisparity,
    ParallelLines,
    DegenerateSegment,
    StereoFailure,
    NoPath,
    StartInObstacle,
    GoalInObstacle,
    OverlapError,
    InvalidArgument,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& msg)
        : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}

    Err code() const noexcept { return code_; }

private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) {
    throw Error(code, msg);
}

}  // namespace vispath
