#pragma once

#include <stdexcept>
#include <string>

namespace mj {

// Input that cannot be parsed or violates the documented file format.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller handed an argument that violates a documented precondition.
struct precondition_error : std::invalid_argument {
    explicit precondition_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// An exhaustive search ran out of its state budget.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An internal invariant failed; indicates a bug, not bad input.
struct internal_error : std::logic_error {
    explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw precondition_error(msg);
}

// Always-on invariant check (independent of NDEBUG): the algorithms in this
// library cross-validate their own combinatorial bookkeeping.
inline void check(bool cond, const std::string& msg) {
    if (!cond) throw internal_error(msg);
}

}  // namespace mj
