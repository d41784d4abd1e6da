#include "plap/nonlinearity.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace plap {

Nonlinearity Nonlinearity::power(double p, double q, double C) {
  // q <= p is constructible so the validator can report the degenerate case
  if (p <= 1) throw std::invalid_argument("nonlinearity: p must exceed 1");
  if (q <= 1) throw std::invalid_argument("nonlinearity: q must exceed 1");
  if (C <= 0) throw std::invalid_argument("nonlinearity: C must be positive");
  Nonlinearity nl;
  nl.mode_ = NonlinearityMode::superlinear_power;
  nl.p_ = p;
  nl.q_ = q;
  nl.C_ = C;
  return nl;
}

Nonlinearity Nonlinearity::resonant(double p, double lambda) {
  if (p <= 1) throw std::invalid_argument("nonlinearity: p must exceed 1");
  if (lambda <= 0) throw std::invalid_argument("nonlinearity: lambda must be positive");
  Nonlinearity nl;
  nl.mode_ = NonlinearityMode::resonant;
  nl.p_ = p;
  nl.q_ = p;
  nl.lambda_ = lambda;
  return nl;
}

double Nonlinearity::f(double s) const {
  if (s == 0) return 0.0;
  if (mode_ == NonlinearityMode::superlinear_power) return C_ * std::pow(std::abs(s), q_ - 2) * s;
  return lambda_ * std::pow(std::abs(s), p_ - 2) * s;
}

double Nonlinearity::F(double s) const {
  if (s == 0) return 0.0;
  if (mode_ == NonlinearityMode::superlinear_power) return C_ * std::pow(std::abs(s), q_) / q_;
  return lambda_ * std::pow(std::abs(s), p_) / p_;
}

double Nonlinearity::fprime(double s) const {
  const double e = growth_exponent();
  const double c = mode_ == NonlinearityMode::superlinear_power ? C_ : lambda_;
  if (s == 0) {
    if (e > 2) return 0.0;
    if (e == 2) return c;
    return std::numeric_limits<double>::infinity();
  }
  return c * (e - 1) * std::pow(std::abs(s), e - 2);
}

std::string Nonlinearity::describe() const {
  std::ostringstream os;
  if (mode_ == NonlinearityMode::superlinear_power)
    os << "f(s) = " << C_ << " |s|^" << q_ - 2 << " s  (p = " << p_ << ")";
  else
    os << "f(s) = " << lambda_ << " |s|^" << p_ - 2 << " s  (resonant, p = " << p_ << ")";
  return os.str();
}

AssumptionReport validate_assumptions(const Nonlinearity& nl, double smin, double smax,
                                      int samples, double lambda1_estimate) {
  if (!(0 < smin && smin < smax) || samples < 2)
    throw std::invalid_argument("validate_assumptions: need 0 < smin < smax and at least 2 samples");

  AssumptionReport rep;
  if (nl.mode() == NonlinearityMode::resonant) {
    for (const char* name : {"regularity", "growth", "superhomogeneity", "superquadraticity"})
      rep.checks.push_back({name, false, false, "not applicable in the resonant family"});
    return rep;
  }

  const double p = nl.p(), q = nl.q(), C = nl.C();
  std::vector<double> ss;
  for (int k = 0; k < samples; ++k) {
    const double t = smin * std::pow(smax / smin, double(k) / (samples - 1));
    ss.push_back(t);
    ss.push_back(-t);
  }

  // regularity away from zero: finite values and oddness of f on the samples
  {
    bool ok = true;
    for (double s : ss)
      ok = ok && std::isfinite(nl.f(s)) && std::isfinite(nl.fprime(s)) && nl.f(-s) == -nl.f(s);
    rep.checks.push_back({"regularity", true, ok, "f finite and odd on samples, F even"});
  }

  // subcritical growth: |s f'(s)|, |f(s)| <= C'(|s|^{q-1} + 1); q < p* with N = 2
  {
    const double pstar = p < 2 ? 2 * p / (2 - p) : std::numeric_limits<double>::infinity();
    bool ok = q > p && q < pstar;
    std::string note = std::isinf(pstar) ? "p >= N = 2: p* = infinity, subcriticality vacuous" : "";
    const double Cg = std::max(C, C * (q - 1)) * 1.0000001;
    for (double s : ss) {
      const double bound = Cg * (std::pow(std::abs(s), q - 1) + 1);
      ok = ok && std::abs(s * nl.fprime(s)) <= bound && std::abs(nl.f(s)) <= bound;
    }
    rep.checks.push_back({"growth", true, ok, note});
  }

  // strict superhomogeneity f'(s) > (p-1) f(s)/s > 0, and the small-argument
  // limit f(s)/(|s|^{p-2}s) below lambda1
  {
    bool ok = true;
    for (double s : ss) {
      const double ratio = nl.f(s) / s;
      ok = ok && ratio > 0 && nl.fprime(s) > (p - 1) * ratio;
    }
    const double s0 = smin;
    const double small_limit = nl.f(s0) / (std::pow(std::abs(s0), p - 2) * s0);
    ok = ok && small_limit < lambda1_estimate;
    std::ostringstream os;
    os << "f(s)/(|s|^{p-2}s) at s = " << s0 << " is " << small_limit << " vs lambda1 "
       << lambda1_estimate;
    rep.checks.push_back({"superhomogeneity", true, ok, os.str()});
  }

  // superquadraticity: 0 < theta F(s) <= s f(s) with theta = q
  {
    bool ok = q > p;
    for (double s : ss) {
      const double lhs = q * nl.F(s);
      ok = ok && lhs > 0 && lhs <= s * nl.f(s) * (1 + 1e-12);
    }
    rep.checks.push_back({"superquadraticity", true, ok, "theta = q, any s0 > 0"});
  }
  return rep;
}

}  // namespace plap
