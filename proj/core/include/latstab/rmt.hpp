#pragma once

#include <string>
#include <vector>

#include "latstab/haar_weyl.hpp"

namespace latstab {

enum class ActionChoice { ExactQuadratic, Wilson };
const char* to_string(ActionChoice c);

// w = (1/N_C) int e^{-L(lambda)/beta} rho(lambda) d^N lambda.
double w_of_beta(double beta, int N, ActionChoice choice);
double log_w_of_beta(double beta, int N, ActionChoice choice);

struct LimitPoint {
  double x = 0.0;  // beta or a
  double value = 0.0;
  double target = 0.0;
  double abs_err = 0.0;
};

struct LimitSweep {
  int N = 1;
  std::string variable;  // "beta" or "a"
  std::vector<LimitPoint> points;
  double target = 0.0;
  // log-log slope of abs_err against x over the last two points
  double rate = 0.0;
};

// w / beta^{N^2/2} on a grid sorted into decreasing beta; target N_G/N_C.
LimitSweep cue_gue_limit(int N, std::vector<double> betas, ActionChoice choice = ActionChoice::Wilson);

// f^n(a) = ln z(a) - N^2 ln(g a) at d = 2 with beta = (g a)^2; target ln(N_G/N_C).
LimitSweep d2_free_energy(int N, std::vector<double> as, double g2 = 1.0);

// Smallest value of 2 sum(1 - cos) - (4/pi^2)|lambda|^2 over a uniform grid in (-pi,pi]^N.
double wilson_quadratic_hypothesis_margin(int N, int points_per_axis);

// 2^{-(N^2-N)/2} pi^{-N/2} prod_{j<N} j!. Equals 2^N N_G/N_C, so it is kept
// for comparison only; the limits assert the integral ratio.
double displayed_limit_closed_form(int N);
// N^2 (-ln sqrt2 - ln(2 pi)/(2N) + (1/N^2) sum_{j<N} ln j!) = ln(N_G/N_C)
double per_n2_limit_expression(int N);

}  // namespace latstab
