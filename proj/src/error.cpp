#include "gkt/error.hpp"

namespace gkt {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config: return "config error";
        case ErrorKind::Io: return "io error";
        case ErrorKind::BadMagic: return "bad magic";
        case ErrorKind::BadVersion: return "unsupported version";
        case ErrorKind::Truncated: return "truncated stream";
        case ErrorKind::Inconsistent: return "inconsistent stream";
        case ErrorKind::ShapeMismatch: return "shape mismatch";
        case ErrorKind::MemoryCap: return "memory cap exceeded";
        case ErrorKind::OutOfRange: return "out of range";
        case ErrorKind::Equivalence: return "equivalence failure";
        case ErrorKind::Internal: return "internal error";
    }
    return "unknown error";
}

} // namespace gkt
