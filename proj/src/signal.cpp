#include "adaptlab/signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adaptlab {

Signal::Signal(SinusoidSum s) : kind_(std::move(s)) {
  for (const auto& t : std::get<SinusoidSum>(kind_).terms)
    if (!std::isfinite(t.amplitude) || !std::isfinite(t.omega) ||
        !std::isfinite(t.phase))
      throw std::invalid_argument("Signal: non-finite sinusoid term");
}

Signal::Signal(PiecewiseConstant p) : kind_(std::move(p)) {
  const auto& pw = std::get<PiecewiseConstant>(kind_);
  if (pw.breakpoints.empty() || pw.breakpoints.size() != pw.values.size())
    throw std::invalid_argument(
        "Signal: piecewise breakpoints/values sizes must match and be nonempty");
  for (std::size_t i = 1; i < pw.breakpoints.size(); ++i)
    if (!(pw.breakpoints[i] > pw.breakpoints[i - 1]))
      throw std::invalid_argument(
          "Signal: piecewise breakpoints must be strictly increasing");
}

Signal Signal::sinusoid(double amplitude, double omega, double phase) {
  return Signal(SinusoidSum{{{amplitude, omega, phase}}});
}

double Signal::operator()(double t) const {
  if (const auto* c = std::get_if<ConstantSignal>(&kind_)) return c->value;
  if (const auto* s = std::get_if<SinusoidSum>(&kind_)) {
    double y = 0.0;
    for (const auto& term : s->terms)
      y += term.amplitude * std::sin(term.omega * t + term.phase);
    return y;
  }
  const auto& pw = std::get<PiecewiseConstant>(kind_);
  auto it = std::upper_bound(pw.breakpoints.begin(), pw.breakpoints.end(), t);
  if (it == pw.breakpoints.begin()) return pw.values.front();
  return pw.values[static_cast<std::size_t>(it - pw.breakpoints.begin()) - 1];
}

double Signal::sup_bound() const {
  if (const auto* c = std::get_if<ConstantSignal>(&kind_))
    return std::fabs(c->value);
  if (const auto* s = std::get_if<SinusoidSum>(&kind_)) {
    double b = 0.0;
    for (const auto& term : s->terms) b += std::fabs(term.amplitude);
    return b;
  }
  const auto& pw = std::get<PiecewiseConstant>(kind_);
  double b = 0.0;
  for (double v : pw.values) b = std::max(b, std::fabs(v));
  return b;
}

bool Signal::is_constant() const {
  return std::holds_alternative<ConstantSignal>(kind_);
}

Vec eval(const VectorSignal& sig, double t) {
  Vec y(sig.size());
  for (std::size_t i = 0; i < sig.size(); ++i) y[i] = sig[i](t);
  return y;
}

double sup_bound(const VectorSignal& sig) {
  double s = 0.0;
  for (const auto& comp : sig) {
    const double b = comp.sup_bound();
    s += b * b;
  }
  return std::sqrt(s);
}

}  // namespace adaptlab
