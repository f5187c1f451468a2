#pragma once

#include <stdexcept>
#include <string>

namespace bilap {

// Precondition violations: bad arguments or inputs that fail a documented
// contract. CLI maps these to exit code 2.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical failures: the computation started but could not finish.
// CLI maps these to exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroRadiusError : PreconditionError {
    ZeroRadiusError() : PreconditionError("series start radius must be positive") {}
    explicit ZeroRadiusError(const std::string& what) : PreconditionError(what) {}
};

struct NonPositiveUError : PreconditionError {
    NonPositiveUError() : PreconditionError("u must be positive to evaluate u^-q") {}
};

struct TooFewSamplesError : PreconditionError {
    explicit TooFewSamplesError(std::size_t got, std::size_t need)
        : PreconditionError("need at least " + std::to_string(need) +
                            " samples, got " + std::to_string(got)) {}
};

struct StepBudgetExceededError : NumericalError {
    explicit StepBudgetExceededError(double r)
        : NumericalError("step budget exhausted at r = " + std::to_string(r)), radius(r) {}
    double radius;
};

struct InvalidBracketError : PreconditionError {
    explicit InvalidBracketError(const std::string& what) : PreconditionError(what) {}
};

struct NonMonotoneWitnessError : NumericalError {
    NonMonotoneWitnessError(double beta_global, double beta_extinct)
        : NumericalError("global outcome at beta = " + std::to_string(beta_global) +
                         " below extinct outcome at beta = " + std::to_string(beta_extinct)),
          beta_global(beta_global), beta_extinct(beta_extinct) {}
    double beta_global;
    double beta_extinct;
};

struct NotGlobalError : PreconditionError {
    explicit NotGlobalError(double beta)
        : PreconditionError("run at beta = " + std::to_string(beta) +
                            " did not reach the target radius") {}
};

struct EmptyWindowError : NumericalError {
    EmptyWindowError() : NumericalError("bracket traces never agree to the requested tolerance") {}
};

struct NonPositiveLError : PreconditionError {
    NonPositiveLError() : PreconditionError("linear growth coefficient L must be positive") {}
};

struct SOutOfRangeError : PreconditionError {
    explicit SOutOfRangeError(double s)
        : PreconditionError("inverted radius s = " + std::to_string(s) + " outside (0, 1]") {}
};

struct WrongRegimeError : PreconditionError {
    explicit WrongRegimeError(const std::string& what) : PreconditionError(what) {}
};

struct WindowTooSmallError : PreconditionError {
    explicit WindowTooSmallError(const std::string& what) : PreconditionError(what) {}
};

struct ResonanceError : PreconditionError {
    ResonanceError(int k, double a)
        : PreconditionError("forcing rate a = " + std::to_string(a) +
                            " resonates with a characteristic root at k = " + std::to_string(k)) {}
};

struct NonIntegrableForcingError : PreconditionError {
    explicit NonIntegrableForcingError(double a)
        : PreconditionError("k = 1 forcing must decay faster than e^-t, got a = " +
                            std::to_string(a)) {}
};

struct EmptyCoefficientsError : PreconditionError {
    EmptyCoefficientsError() : PreconditionError("coefficient map is empty") {}
};

struct ContainsK0Error : PreconditionError {
    ContainsK0Error() : PreconditionError("coefficients must be orthogonal to the k = 0 mode") {}
};

} // namespace bilap
