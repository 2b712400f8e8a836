#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace burstnet {

enum class ErrorCode {
    // netcore
    DuplicateSynapse,
    DanglingEndpoint,
    InvalidWeight,
    MissingRegion,
    DuplicateRegion,
    SelfLoop,
    InvalidApicalSource,
    ParseError,
    // dynamics
    InvalidStimulus,
    PhaseMissing,
    // episodic
    EmptyCue,
    // neuromod
    ZeroDelta,
    ZeroValence,
    // plasticity
    EmptyStore,
    // harness
    ConfigInvalid,
    SnapshotMissing,
    Divergence,
    UnknownSeries,
    // generic precondition failure
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace burstnet
