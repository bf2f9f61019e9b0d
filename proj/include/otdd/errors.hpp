#ifndef OTDD_ERRORS_HPP
#define OTDD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace otdd {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (bad files, dimension mismatches,
/// invalid datasets). Maps to CLI exit code 3.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Hard solver failures: non-finite intermediates, non-convergent matrix
/// iterations, problem sizes over the exact-solver cap. Maps to CLI exit
/// code 4. Plain non-convergence of Sinkhorn is not an error; it is
/// reported through TransportPlan::converged.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace otdd

#endif  // OTDD_ERRORS_HPP
