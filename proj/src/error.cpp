#include "rpet/error.hpp"

namespace rpet {

Error::Error(ErrorKind kind, std::string message) : kind_(kind), message_(std::move(message)) {
    compose();
}

void Error::set_stage(std::string stage) {
    if (!stage_.empty()) return;
    stage_ = std::move(stage);
    compose();
}

void Error::compose() {
    what_ = stage_.empty() ? message_ : stage_ + ": " + message_;
}

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Usage: return 2;
        case ErrorKind::Domain:
        case ErrorKind::Validation:
        case ErrorKind::Parse:
        case ErrorKind::Ordering: return 3;
        case ErrorKind::Detection:
        case ErrorKind::Solver: return 4;
        case ErrorKind::Io: return 5;
    }
    return 1;
}

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Ordering: return "ordering";
        case ErrorKind::Detection: return "detection";
        case ErrorKind::Solver: return "solver";
        case ErrorKind::Io: return "io";
        case ErrorKind::Usage: return "usage";
    }
    return "unknown";
}

}  // namespace rpet
