#pragma once

#include <functional>
#include <string>
#include <vector>

namespace sopslab {

struct FeedbackFunction {
  std::string name;
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  double a = 0.0;  // -f(+inf)
  double b = 0.0;  // f(-inf)
  double fprime0 = 0.0;
  double max_abs_deriv = 0.0;

  double operator()(double xi) const { return eval(xi); }
};

FeedbackFunction tanh_feedback(double a, double b);

/// Wraps arbitrary callables; tail limits and f'(0) are taken on trust and
/// checked by validate_assumption.
FeedbackFunction custom_feedback(std::string name, std::function<double(double)> eval,
                                 std::function<double(double)> deriv, double a, double b);

struct FeedbackSample {
  double xi;
  double f;
  double fprime;
};

/// Monotone cubic interpolation through (xi, f) with the given slopes limited
/// where they would overshoot. Beyond the table f clamps to -a (right) and b (left).
FeedbackFunction tabulated_feedback(std::vector<FeedbackSample> table, double a, double b);

/// CSV with header `xi,f,fprime`; a and b default to -f(last) and f(first).
FeedbackFunction load_feedback_csv(const std::string& path);

struct ValidationCheck {
  std::string name;
  bool passed;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_passed() const;
};

ValidationReport validate_assumption(const FeedbackFunction& f, double grid_half_width,
                                     double tol);

}  // namespace sopslab
