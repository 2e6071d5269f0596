#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tpwn {

// Base for everything this library throws on purpose.
struct NetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Construction / parsing problems: bad references, duplicate ids,
// non-positive weights, negative durations, malformed documents.
struct ValidationError : NetError {
    using NetError::NetError;
};

// JSON input rejected before it ever becomes a net.
struct ParseError : ValidationError {
    std::size_t line = 0;
    std::size_t column = 0;
    ParseError(const std::string& msg, std::size_t line_, std::size_t column_)
        : ValidationError(msg), line(line_), column(column_) {}
    explicit ParseError(const std::string& msg) : ValidationError(msg) {}
};

// fire()/timestamp update on a transition that is not enabled.
struct NotEnabledError : NetError {
    using NetError::NetError;
};

// Firing would place a second token on a place (1-safety violation).
struct UnsafeFiringError : NetError {
    std::string place;
    UnsafeFiringError(const std::string& msg, std::string place_)
        : NetError(msg), place(std::move(place_)) {}
};

// Exploration found a reachable marking that double-marks a place.
// Carries the offending place and a firing sequence reaching it.
struct Unsafe1Error : NetError {
    std::string place;
    std::string trace;
    Unsafe1Error(const std::string& msg, std::string place_, std::string trace_)
        : NetError(msg), place(std::move(place_)), trace(std::move(trace_)) {}
};

// State cap hit (reachability exploration or chain construction).
struct StateExplosionError : NetError {
    std::size_t limit = 0;
    StateExplosionError(const std::string& msg, std::size_t limit_)
        : NetError(msg), limit(limit_) {}
};

// Chain construction ran into a non-final marking with nothing enabled.
// Only possible when soundness was asserted instead of checked.
struct DeadlockError : NetError {
    std::string marking;
    DeadlockError(const std::string& msg, std::string marking_)
        : NetError(msg), marking(std::move(marking_)) {}
};

// A net failed the confusion-freeness gate; expected time is undefined.
struct NotConfusionFreeError : NetError {
    using NetError::NetError;
};

// Linear system has no unique solution (unsound net slipped past the gates).
struct SingularSystemError : NetError {
    using NetError::NetError;
};

// Exact enumeration was asked for (mass_epsilon = 0) but a branch hit the
// depth cap, so the run set cannot be exhausted.
struct NonTerminationError : NetError {
    using NetError::NetError;
};

// 64-bit timestamp arithmetic would overflow.
struct OverflowError : NetError {
    using NetError::NetError;
};

// PERT: probability denominator is not a power of two.
struct NonDyadicError : ValidationError {
    using ValidationError::ValidationError;
};

// PERT: instance exceeds the exact-enumeration edge cap.
struct TooManyEdgesError : NetError {
    std::size_t edges = 0;
    std::size_t cap = 0;
    TooManyEdgesError(const std::string& msg, std::size_t edges_, std::size_t cap_)
        : NetError(msg), edges(edges_), cap(cap_) {}
};

}  // namespace tpwn
