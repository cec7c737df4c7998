#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rc {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input file could not be parsed. Message carries file and line context.
class ParseError : public Error {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": " + what), file_(file), line_(line) {}

    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

// Semantic constraint violated: dangling reference, bad config, domain error.
class ValidationError : public Error {
public:
    using Error::Error;
};

// The solver hit max_iterations without meeting the stopping rule. Carries
// the final mean delta, the per-iteration mean trace, and (when recorded)
// the per-iteration score history, so callers can inspect the run.
class ConvergenceError : public Error {
public:
    ConvergenceError(std::uint32_t iterations, double final_delta, std::vector<double> trace,
                     std::vector<std::vector<double>> history = {})
        : Error("no convergence after " + std::to_string(iterations) +
                " iterations; final mean delta " + std::to_string(final_delta)),
          final_delta_(final_delta), trace_(std::move(trace)), history_(std::move(history)) {}

    double final_delta() const { return final_delta_; }
    const std::vector<double>& trace() const { return trace_; }
    const std::vector<std::vector<double>>& history() const { return history_; }

private:
    double final_delta_;
    std::vector<double> trace_;
    std::vector<std::vector<double>> history_;
};

} // namespace rc
