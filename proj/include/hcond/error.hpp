#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hcond {

enum class Errc {
    PivotAbsent,
    TrivialResolvent,
    TrivialResult,
    IllegalStep,
    NotARefutation,
    MalformedDag,
    InputHasWeakening,
    IsolatedLeftVertex,
    UncoveredVariable,
    PreconditionViolated,
    NoBoundaryVertex,
    WidthExceedsRadius,
    NotHomogeneous,
    InternalInvariant,
    ParseError,
};

constexpr std::string_view to_string(Errc e) {
    switch (e) {
    case Errc::PivotAbsent: return "PivotAbsent";
    case Errc::TrivialResolvent: return "TrivialResolvent";
    case Errc::TrivialResult: return "TrivialResult";
    case Errc::IllegalStep: return "IllegalStep";
    case Errc::NotARefutation: return "NotARefutation";
    case Errc::MalformedDag: return "MalformedDag";
    case Errc::InputHasWeakening: return "InputHasWeakening";
    case Errc::IsolatedLeftVertex: return "IsolatedLeftVertex";
    case Errc::UncoveredVariable: return "UncoveredVariable";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::NoBoundaryVertex: return "NoBoundaryVertex";
    case Errc::WidthExceedsRadius: return "WidthExceedsRadius";
    case Errc::NotHomogeneous: return "NotHomogeneous";
    case Errc::InternalInvariant: return "InternalInvariant";
    case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// A proof step that fails verification. `index` is the 0-based position in the trace.
class IllegalStep : public Error {
public:
    IllegalStep(std::size_t index, const std::string& reason)
        : Error(Errc::IllegalStep, "step " + std::to_string(index + 1) + ": " + reason),
          index_(index), reason_(reason) {}

    std::size_t index() const noexcept { return index_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t index_;
    std::string reason_;
};

} // namespace hcond
