#pragma once

#include <cstdint>

// Per-thread tally of arithmetic operations in the coefficient field ("ops").
//
// Every field operation bumps the counter by one; bulk kernels (matrix
// products, number-theoretic transforms) add their operation counts in one
// step. Callers measure a computation by taking the difference of now()
// before and after, or with a Scope.
namespace oremul::opcount {

inline thread_local std::uint64_t counter = 0;

inline void add(std::uint64_t n) noexcept { counter += n; }
inline void bump() noexcept { ++counter; }
inline std::uint64_t now() noexcept { return counter; }

class Scope {
 public:
  Scope() noexcept : start_(counter) {}
  std::uint64_t elapsed() const noexcept { return counter - start_; }

 private:
  std::uint64_t start_;
};

}  // namespace oremul::opcount
