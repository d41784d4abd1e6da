#pragma once

#include <optional>
#include <string>
#include <vector>

namespace plap {

enum class NonlinearityMode { superlinear_power, resonant };

/// Right-hand side descriptor for -Lap_p u = f(u).
///
/// Two closed-form families: the superlinear power f(s) = C |s|^{q-2} s with
/// q in (p, p*) and C > 0, and the resonant f(s) = lambda |s|^{p-2} s.  Both
/// are odd with even primitive F.
class Nonlinearity {
 public:
  static Nonlinearity power(double p, double q, double C);
  static Nonlinearity resonant(double p, double lambda);

  NonlinearityMode mode() const { return mode_; }
  double p() const { return p_; }
  double q() const { return q_; }
  double C() const { return C_; }
  double lambda() const { return lambda_; }
  /// Growth exponent of the active family (q for power, p for resonant).
  double growth_exponent() const { return mode_ == NonlinearityMode::superlinear_power ? q_ : p_; }

  double f(double s) const;
  double F(double s) const;
  /// f'(s); +infinity at s = 0 when the exponent drops below 2.
  double fprime(double s) const;

  std::string describe() const;

 private:
  Nonlinearity() = default;
  NonlinearityMode mode_ = NonlinearityMode::superlinear_power;
  double p_ = 2, q_ = 4, C_ = 1, lambda_ = 0;
};

struct AssumptionCheck {
  std::string name;
  bool applicable = true;
  bool passed = false;
  std::string detail;
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (c.applicable && !c.passed) return false;
    return true;
  }
};

/// Samples the structure assumptions on the superlinear family over
/// [-smax, -smin] union [smin, smax]: smoothness away from zero, subcritical
/// growth, the strict superhomogeneity f'(s) > (p-1) f(s)/s together with the
/// small-argument bound f(s)/(|s|^{p-2}s) < lambda1, and the superquadraticity
/// 0 < theta F(s) <= s f(s) with theta = q.  For the resonant family the
/// checks are reported not-applicable.
AssumptionReport validate_assumptions(const Nonlinearity& nl, double smin, double smax,
                                      int samples, double lambda1_estimate);

}  // namespace plap
