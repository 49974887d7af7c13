#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace cmclab {

// Base class for everything this library throws on a violated contract.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- exact layer ---------------------------------------------------------

struct ZeroMapError : Error {
    ZeroMapError() : Error("operation undefined for the identically zero map") {}
};

struct EvalAtPoleError : Error {
    explicit EvalAtPoleError(const std::string& where)
        : Error("exact evaluation at a pole: " + where) {}
};

// The antiderivative would contain a logarithm; `pole` is one offending pole
// (numeric approximation of a root of the residual's denominator).
struct LogarithmicObstruction : Error {
    std::complex<double> pole;
    explicit LogarithmicObstruction(std::complex<double> p)
        : Error("antiderivative has a logarithmic term at a pole"), pole(p) {}
};

// --- analysis ------------------------------------------------------------

struct OddOrderError : Error {
    int order;
    explicit OddOrderError(int n)
        : Error("pole/zero order must be even, got " + std::to_string(n)), order(n) {}
};

struct NotSingularError : Error {
    NotSingularError() : Error("point is neither a pole nor a zero of f") {}
};

struct InsufficientTermsError : Error {
    InsufficientTermsError() : Error("series computed to too few terms") {}
};

struct ObstructedError : Error {
    ObstructedError() : Error("second solution requested for a non-integrable report") {}
};

struct NotNormalizedError : Error {
    NotNormalizedError() : Error("operation valid only for locally normalized f = w^{+-n}") {}
};

struct StepSizeUnderflow : Error {
    StepSizeUnderflow() : Error("adaptive integrator step size underflow") {}
};

struct SingularityOnPath : Error {
    std::complex<double> where;
    explicit SingularityOnPath(std::complex<double> w)
        : Error("integration path passes through a singularity"), where(w) {}
};

// --- loops and factorizations ---------------------------------------------

struct TruncationMismatch : Error {
    TruncationMismatch() : Error("matrix loops have different truncation or parity") {}
};

struct SingularLoopError : Error {
    SingularLoopError() : Error("loop not invertible: determinant too small at a sample") {}
};

struct NotUnimodularError : Error {
    NotUnimodularError() : Error("loop determinant deviates from 1 beyond tolerance") {}
};

struct OutsideBigCell : Error {
    OutsideBigCell() : Error("Birkhoff splitting failed: point outside the big cell") {}
};

struct FactorizationDiverged : Error {
    FactorizationDiverged() : Error("block-Toeplitz Cholesky factor did not converge") {}
};

// --- dressing --------------------------------------------------------------

struct DegeneratePotential : Error {
    explicit DegeneratePotential(const std::string& why)
        : Error("dressing step degenerates the potential: " + why) {}
};

struct CaseUndefinedError : Error {
    explicit CaseUndefinedError(const std::string& why)
        : Error("order bookkeeping case undefined: " + why) {}
};

struct BlockedError : Error {
    std::complex<double> at;
    explicit BlockedError(std::complex<double> z)
        : Error("singularity creation blocked: antiderivative vanishes at the target point"),
          at(z) {}
};

// --- pipeline / surface -----------------------------------------------------

struct PathTooClose : Error {
    std::complex<double> singularity;
    explicit PathTooClose(std::complex<double> s)
        : Error("integration path too close to a singularity"), singularity(s) {}
};

struct StencilDegenerate : Error {
    StencilDegenerate() : Error("finite-difference stencil incomplete or degenerate") {}
};

struct EmptyGridError : Error {
    EmptyGridError() : Error("domain grid contains no admissible sample points") {}
};

struct IoError : Error {
    explicit IoError(const std::string& path) : Error("cannot write file: " + path) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

}  // namespace cmclab
