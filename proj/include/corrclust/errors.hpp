#pragma once

#include <stdexcept>
#include <string>

namespace corrclust {

// Error taxonomy shared by the library and the CLI.  The CLI maps these to
// process exit codes: parse_error -> 2, budget_error -> 3, invariant_error -> 4.
// Plain std::invalid_argument (bad arguments / configuration) also maps to 2.

// Malformed input text (instance or clustering files).  line() is 1-based and
// 0 when no specific line applies.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

// An enumeration or search cap was exceeded.  lower_bound() carries whatever
// bound the aborted search established (e.g. "minimum cover exceeds k"), or -1
// when none applies.
class budget_error : public std::runtime_error {
public:
    explicit budget_error(const std::string& what, long long lower_bound = -1)
        : std::runtime_error(what), lower_bound_(lower_bound) {}

    long long lower_bound() const { return lower_bound_; }

private:
    long long lower_bound_;
};

// An internal consistency check failed; indicates a bug, not bad input.
class invariant_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace corrclust
