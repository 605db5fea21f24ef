// Error types shared across the library. Every failure mode callers are
// expected to react to gets its own type; everything else is a plain Error.

#ifndef TAILDEP_ERRORS_HPP
#define TAILDEP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace taildep {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Correlation matrix validation.
class NotPositiveDefinite : public Error { public: using Error::Error; };
class DiagonalNotUnit : public Error { public: using Error::Error; };
class EntryOutOfRange : public Error { public: using Error::Error; };

// Numerical machinery.
class DomainError : public Error { public: using Error::Error; };
class ConvergenceFailure : public Error { public: using Error::Error; };
class QuadratureFailure : public Error { public: using Error::Error; };

// Deep-tail oracle: probabilities below exp(kLogFloor) are reported as a
// typed signal instead of an underflowed zero.
class Underflow : public Error { public: using Error::Error; };

// Estimators.
class InsufficientTail : public Error { public: using Error::Error; };
class DegenerateSample : public Error { public: using Error::Error; };

// Quadratic program certification.
class NoCertifiedSubset : public Error { public: using Error::Error; };

inline constexpr double kLogFloor = -600.0;

}  // namespace taildep

#endif  // TAILDEP_ERRORS_HPP
