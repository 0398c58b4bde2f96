#pragma once

// Closed signal kinds for reference commands and identification inputs.
// Restricting to these three shapes keeps the sup-norm bound and the
// excitation window constants computable in closed form; arbitrary
// callables are deliberately not accepted.

#include <variant>
#include <vector>

#include "adaptlab/numerics.hpp"

namespace adaptlab {

struct SinusoidTerm {
  double amplitude = 0.0;
  double omega = 0.0;  // rad/s
  double phase = 0.0;  // rad
};

struct ConstantSignal {
  double value = 0.0;
};

struct SinusoidSum {
  std::vector<SinusoidTerm> terms;
};

// values[i] holds on [breakpoints[i], breakpoints[i+1]); the last value
// holds forever, the first also covers t < breakpoints[0].
struct PiecewiseConstant {
  std::vector<double> breakpoints;
  std::vector<double> values;
};

class Signal {
 public:
  Signal() : kind_(ConstantSignal{}) {}
  Signal(ConstantSignal c) : kind_(c) {}
  Signal(SinusoidSum s);
  Signal(PiecewiseConstant p);

  static Signal constant(double c) { return Signal(ConstantSignal{c}); }
  static Signal sinusoid(double amplitude, double omega, double phase = 0.0);

  double operator()(double t) const;
  // Closed-form sup over all t: |c|, sum of |amplitude|, max |value|.
  double sup_bound() const;

  bool is_constant() const;
  const std::variant<ConstantSignal, SinusoidSum, PiecewiseConstant>& raw()
      const {
    return kind_;
  }

 private:
  std::variant<ConstantSignal, SinusoidSum, PiecewiseConstant> kind_;
};

// One Signal per component.
using VectorSignal = std::vector<Signal>;

Vec eval(const VectorSignal& sig, double t);
double sup_bound(const VectorSignal& sig);  // sqrt of summed component bounds

}  // namespace adaptlab
