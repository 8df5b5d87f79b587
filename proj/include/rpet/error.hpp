#pragma once

#include <exception>
#include <string>

namespace rpet {

enum class ErrorKind {
    Domain,      // precondition on a numeric argument
    Validation,  // malformed domain object (record, mesh, card)
    Parse,       // unreadable input file contents
    Ordering,    // pipeline stages called out of order
    Detection,   // curve feature not found
    Solver,      // linear solve failed or did not meet its residual
    Io,
    Usage,
};

/// Base of every error thrown by the library.  Carries a kind (mapped to a
/// process exit status by the CLI) and an optional pipeline stage name.
class Error : public std::exception {
public:
    Error(ErrorKind kind, std::string message);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& message() const noexcept { return message_; }
    const std::string& stage() const noexcept { return stage_; }

    /// Tag the error with the stage that raised it; the first tag wins so
    /// nested pipelines keep the innermost stage.
    void set_stage(std::string stage);

    const char* what() const noexcept override { return what_.c_str(); }

private:
    void compose();

    ErrorKind kind_;
    std::string message_;
    std::string stage_;
    std::string what_;
};

struct DomainError : Error {
    explicit DomainError(std::string m) : Error(ErrorKind::Domain, std::move(m)) {}
};

struct ValidationError : Error {
    explicit ValidationError(std::string m) : Error(ErrorKind::Validation, std::move(m)) {}
};

struct ParseError : Error {
    explicit ParseError(std::string m) : Error(ErrorKind::Parse, std::move(m)) {}
};

struct OrderingError : Error {
    explicit OrderingError(std::string m) : Error(ErrorKind::Ordering, std::move(m)) {}
};

struct DetectionError : Error {
    DetectionError(std::string m, double best_r2 = 0.0)
        : Error(ErrorKind::Detection, std::move(m)), best_r2(best_r2) {}
    double best_r2;
};

struct SolverError : Error {
    SolverError(std::string m, double residual)
        : Error(ErrorKind::Solver, std::move(m)), residual(residual) {}
    double residual;
};

struct IoError : Error {
    explicit IoError(std::string m) : Error(ErrorKind::Io, std::move(m)) {}
};

struct UsageError : Error {
    explicit UsageError(std::string m) : Error(ErrorKind::Usage, std::move(m)) {}
};

/// Process exit status for an error kind: 2 usage, 3 input validation,
/// 4 numerical, 5 I/O.
int exit_code(ErrorKind kind) noexcept;

const char* to_string(ErrorKind kind) noexcept;

}  // namespace rpet
