#pragma once

#include <stdexcept>
#include <string>

namespace asdm {

struct DegenerateSpectrumError : std::domain_error {
  int spectrum_class;
  explicit DegenerateSpectrumError(const std::string& msg, int cls)
      : std::domain_error(msg), spectrum_class(cls) {}
};

struct InfiniteSolutionsError : std::domain_error {
  using std::domain_error::domain_error;
};

struct AlreadyReducibleError : std::domain_error {
  using std::domain_error::domain_error;
};

struct SingularGaugeError : std::domain_error {
  using std::domain_error::domain_error;
};

struct OutOfPatchError : std::domain_error {
  using std::domain_error::domain_error;
};

struct IncompleteCountError : std::runtime_error {
  int found;
  explicit IncompleteCountError(const std::string& msg, int n)
      : std::runtime_error(msg), found(n) {}
};

struct NonContractionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ContinuationFailureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IndeterminateSignError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace asdm
