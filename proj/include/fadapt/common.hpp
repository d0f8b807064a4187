#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fadapt {

using VertexId = std::uint32_t;

// -----------------------------
// Errors
// -----------------------------

// Invalid input: malformed files, violated preconditions, bad parameters.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parse failure in a text input, carrying the 1-based line number.
class ParseError : public ValidationError {
public:
    ParseError(std::size_t line, const std::string& what)
        : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A sweep would exceed the configured work budget.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(double required, double budget)
        : std::runtime_error("weight grid needs " + std::to_string(required) +
                             " points, budget is " + std::to_string(budget)),
          required_(required), budget_(budget) {}
    double required() const noexcept { return required_; }
    double budget() const noexcept { return budget_; }

private:
    double required_;
    double budget_;
};

// -----------------------------
// Floating comparisons
// -----------------------------

inline constexpr double kRelTol = 1e-9;
inline constexpr double kAbsTol = 1e-12;

// Slack allowed around `reference` when two objective values are compared.
inline double tie_slack(double reference) noexcept {
    const double mag = reference < 0 ? -reference : reference;
    const double rel = kRelTol * mag;
    return rel > kAbsTol ? rel : kAbsTol;
}

inline bool nearly_equal(double a, double b) noexcept {
    const double ma = a < 0 ? -a : a;
    const double mb = b < 0 ? -b : b;
    const double diff = a > b ? a - b : b - a;
    return diff <= tie_slack(ma > mb ? ma : mb);
}

// -----------------------------
// Seeded randomness
// -----------------------------

// Mixes a user seed with a stream name (and index) so that every consumer
// draws from its own reproducible stream.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream, std::uint64_t index = 0);

// mt19937_64 with hand-rolled uniform helpers. The std distributions are
// implementation-defined, which would break byte-identical outputs across
// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, std::string_view stream, std::uint64_t index = 0)
        : engine_(derive_seed(seed, stream, index)) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace fadapt
