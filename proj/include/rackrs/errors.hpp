#ifndef RACKRS_ERRORS_HPP
#define RACKRS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rackrs {

/// Base class for all library errors.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A construction hypothesis (divisibility, inequality, integrality) is violated.
/// Carries one message per violated condition.
class HypothesisError : public Error {
   public:
    explicit HypothesisError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

   private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "hypothesis violation:";
        for (const auto& m : v) s += " [" + m + "]";
        return s;
    }
    std::vector<std::string> violations_;
};

/// No admissible subspace was found by the configured search policy.
class SubspaceSearchError : public Error {
   public:
    SubspaceSearchError(long best_degree, long degree_bound, std::size_t candidates)
        : Error("subspace search exhausted: best max-degree " + std::to_string(best_degree) +
                " exceeds bound " + std::to_string(degree_bound) + " after " +
                std::to_string(candidates) + " candidates"),
          best_degree(best_degree),
          degree_bound(degree_bound),
          candidates(candidates) {}

    long best_degree;
    long degree_bound;
    std::size_t candidates;
};

/// A repair produced a wrong symbol or was handed inconsistent inputs.
class RepairError : public Error {
   public:
    using Error::Error;
};

}  // namespace rackrs

#endif
