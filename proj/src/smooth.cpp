#include "joinspace/smooth.hpp"

namespace joinspace {

double theta(double alpha, double beta, double t) {
  if (!(alpha <= beta)) throw std::invalid_argument("theta: need alpha <= beta");
  return std::min(std::max(t, alpha), beta);
}

double theta_prime(double alpha, double beta, double t) {
  if (!(alpha <= beta)) throw std::invalid_argument("theta_prime: need alpha <= beta");
  if (is_ninf(t)) return alpha;
  if (is_pinf(t)) return beta;
  // |t-alpha| = inf when alpha = -inf, so the correction term vanishes there
  return theta(alpha, beta, t) +
         0.5 * (std::exp(-ext_absdiff(t, alpha)) - std::exp(-ext_absdiff(t, beta)));
}

double theta_prime_deriv(double alpha, double beta, double t) {
  if (!(alpha <= beta)) throw std::invalid_argument("theta_prime_deriv: need alpha <= beta");
  if (std::isinf(t)) return 0.0;
  if (t <= alpha) return 0.5 * (std::exp(t - alpha) - std::exp(t - beta));
  if (t >= beta) return 0.5 * (std::exp(beta - t) - std::exp(alpha - t));
  return 1.0 - 0.5 * (std::exp(alpha - t) + std::exp(t - beta));
}

namespace {

// bisection for theta'(t) = y on a bracket known to contain the root
double invert_on_bracket(double alpha, double beta, double y, double lo, double hi) {
  double flo = theta_prime(alpha, beta, lo) - y;
  double fhi = theta_prime(alpha, beta, hi) - y;
  if (flo > 0.0 || fhi < 0.0) throw std::logic_error("theta_prime_inv: bad bracket");
  for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + std::fabs(lo) + std::fabs(hi)); ++i) {
    double mid = 0.5 * (lo + hi);
    double f = theta_prime(alpha, beta, mid) - y;
    if (f < 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double theta_prime_inv(double alpha, double beta, double y) {
  if (!(alpha < beta)) throw std::invalid_argument("theta_prime_inv: need alpha < beta");
  if (y == alpha) return -INF;
  if (y == beta) return INF;
  if (!(alpha < y && y < beta)) throw std::domain_error("theta_prime_inv: y outside [alpha,beta]");
  if (is_ninf(alpha) && is_pinf(beta)) return y;  // theta' = id on a full line
  if (is_ninf(alpha)) {
    // theta'(t) = min(t,beta) - exp(-|t-beta|)/2
    double at_beta = beta - 0.5;
    if (y >= at_beta) return beta - std::log(2.0 * (beta - y));
    return invert_on_bracket(alpha, beta, y, y, y + 0.5 + 1e-9);
  }
  if (is_pinf(beta)) {
    double at_alpha = alpha + 0.5;
    if (y <= at_alpha) return alpha + std::log(2.0 * (y - alpha));
    return invert_on_bracket(alpha, beta, y, y - 0.5 - 1e-9, y);
  }
  double q = 0.5 * (1.0 - std::exp(alpha - beta));  // theta'(alpha) - alpha = beta - theta'(beta)
  if (y <= alpha + q) return alpha + std::log(2.0 * (y - alpha)) - std::log(2.0 * q);
  if (y >= beta - q) return beta - std::log(2.0 * (beta - y)) + std::log(2.0 * q);
  return invert_on_bracket(alpha, beta, y, alpha, beta);
}

namespace {

// smoothing of exp(-|u|): int exp(-|u+r|) w(r) dr = (1+|u|) exp(-|u|)/2
double smear(double u) {
  double a = std::fabs(u);
  if (std::isinf(a)) return 0.0;
  return 0.5 * (1.0 + a) * std::exp(-a);
}

}  // namespace

double theta_second(double alpha, double beta, double t) {
  if (!(alpha <= beta)) throw std::invalid_argument("theta_second: need alpha <= beta");
  if (is_ninf(t)) return alpha;
  if (is_pinf(t)) return beta;
  return theta_prime(alpha, beta, t) +
         0.5 * (smear(ext_sub(t, alpha)) - smear(ext_sub(t, beta)));
}

double omega(double tau) {
  if (!(tau >= 0.0)) throw std::domain_error("omega: tau < 0");
  if (is_pinf(tau)) return INF;
  return tau + 2.0 * std::exp(-0.5 * tau) - 2.0;
}

double omega_inv(double v) {
  if (!(v >= 0.0)) throw std::domain_error("omega_inv: v < 0");
  if (v == 0.0) return 0.0;
  if (is_pinf(v)) return INF;
  double lo = std::max(0.0, v), hi = v + 2.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    double f = omega(mid) - v;
    if (std::fabs(f) <= 1e-13) return mid;
    if (f < 0.0) lo = mid; else hi = mid;
    if (hi - lo <= 1e-15 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace joinspace
