#pragma once

#include <stdexcept>
#include <string>

namespace gkt {

enum class ErrorKind {
    Config,        // bad config file or invalid parameter combination
    Io,            // filesystem / stream failure
    BadMagic,      // binary stream does not start with the expected magic
    BadVersion,    // unsupported format version
    Truncated,     // stream ended before the declared payload
    Inconsistent,  // header fields contradict payload or each other
    ShapeMismatch, // tensors / LUT / rig dimensions disagree
    MemoryCap,     // im2col materialization exceeds the configured cap
    OutOfRange,    // index outside its valid domain
    Equivalence,   // strategy outputs differ where they must be identical
    Internal,      // invariant violated mid-computation
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace gkt
