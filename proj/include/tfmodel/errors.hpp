#pragma once

#include <stdexcept>
#include <string>

namespace tfmodel {

// Precondition violated by a caller-supplied argument.
class argument_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Gamma evaluated at a non-positive integer.
class pole_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Two sampled objects that must share a grid do not.
class grid_mismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The point z lies on the spectrum (segment or a matrix eigenvalue).
class spectrum_hit : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class singular_matrix : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class non_convergence : public std::runtime_error {
public:
    non_convergence(const std::string& what, int iterations, double last_change)
        : std::runtime_error(what + " (iterations=" + std::to_string(iterations) +
                             ", last relative change=" + std::to_string(last_change) + ")"),
          iterations_(iterations), last_change_(last_change) {}

    int iterations() const noexcept { return iterations_; }
    double last_change() const noexcept { return last_change_; }

private:
    int iterations_;
    double last_change_;
};

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tfmodel
