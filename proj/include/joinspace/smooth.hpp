#pragma once
#include "extreal.hpp"

namespace joinspace {

// The clamp theta[alpha,beta](t) and its smoothings against the kernel
// w(r) = exp(-|r|)/2.  alpha <= beta, both may be infinite.

// clamp of t to [alpha,beta]
double theta(double alpha, double beta, double t);

// theta'[alpha,beta](t) = int theta(t+r) w(r) dr
//                       = theta(t) + (exp(-|t-alpha|) - exp(-|t-beta|))/2,
// with theta'(-inf) = alpha, theta'(+inf) = beta.
// Strictly increasing in t when alpha < beta; maps R onto (alpha,beta).
double theta_prime(double alpha, double beta, double t);

// d/dt theta'[alpha,beta](t), in the three pieces
//   t <= alpha:           (exp(t-alpha) - exp(t-beta))/2
//   alpha <= t <= beta:   1 - (exp(alpha-t) + exp(t-beta))/2
//   t >= beta:            (exp(beta-t) - exp(alpha-t))/2
double theta_prime_deriv(double alpha, double beta, double t);

// inverse of t -> theta'[alpha,beta](t); y = alpha gives -inf, y = beta +inf
double theta_prime_inv(double alpha, double beta, double y);

// second smoothing: int theta'(t+r) w(r) dr
double theta_second(double alpha, double beta, double t);

// omega(tau) = tau + 2 exp(-tau/2) - 2 on [0,inf); increasing, tau-2 <= omega(tau) <= tau
double omega(double tau);

// inverse of omega on [0,inf); bisection on [max(0,v), v+2] to residual <= 1e-12
double omega_inv(double v);

}  // namespace joinspace
