#pragma once

#include <stdexcept>
#include <string>

namespace biortho {

/// Broad classification used by the CLI to pick an exit status.
enum class ErrorCategory {
  config,       // invalid input or unsupported configuration
  solver,       // an iterative method failed to converge
  validation,   // a computed object failed an invariant check
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define BIORTHO_DEFINE_ERROR(Name, Category)                          \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what)                            \
        : Error(ErrorCategory::Category, #Name ": " + what) {}        \
  }

// Quadrature and iterative solvers.
BIORTHO_DEFINE_ERROR(NonConvergence, solver);
BIORTHO_DEFINE_ERROR(NoConvergence, solver);
BIORTHO_DEFINE_ERROR(BracketFailure, solver);
BIORTHO_DEFINE_ERROR(DegenerateDerivative, solver);

// Moment algebra.
BIORTHO_DEFINE_ERROR(NonPositive, solver);
BIORTHO_DEFINE_ERROR(PrecisionExhausted, solver);

// Input / domain violations.
BIORTHO_DEFINE_ERROR(InvalidArgument, config);
BIORTHO_DEFINE_ERROR(IrrationalTheta, config);
BIORTHO_DEFINE_ERROR(DegeneratePoint, config);
BIORTHO_DEFINE_ERROR(OnBranchCut, config);
BIORTHO_DEFINE_ERROR(OutOfRange, config);
BIORTHO_DEFINE_ERROR(InvalidConfiguration, config);

// Equilibrium construction.
BIORTHO_DEFINE_ERROR(InvalidSolution, solver);
BIORTHO_DEFINE_ERROR(Unclassifiable, validation);

#undef BIORTHO_DEFINE_ERROR

}  // namespace biortho
