#pragma once

#include <json.hpp>

#include "levy/levy_model.hpp"

namespace flevy::idbounds {

// E|X| <= eps + (4/eps) int_0^eps x nu([x,inf)) dx + 2 int_eps^inf nu([x,inf)) dx
// for X ~ L(1) with L symmetric and without Gaussian part.
double mean_abs_bound(const levy::LevyModel& m, double eps);

// Levy measure of B_{r,t} = (1/t) int_r^0 [(t-s)^d - (-s)^d] L(ds).
struct IntegralLevyMeasure {
  levy::LevyModel model;
  double r = -1.0;
  double t = 1.0;
  double d = 0.25;
};

// (1/t)[(t+s)^d - s^d], decreasing in s >= 0.
double kernel_factor(double d, double t, double s);

// nu_{r,t}([u, inf)) = int_0^|r| nu([u / k(s), inf)) ds with k the kernel factor.
double nu_rt_tail(const IntegralLevyMeasure& ilm, double u);

// t-free majorant int_0^|r| nu([(u/d) s^(1-d), inf)) ds, by quadrature in s.
double majorant_tail(const levy::LevyModel& m, double d, double r, double u);
// Same majorant in closed form: (d/u)^p int_(0,X) x^p nu + |r| nu([X, inf)),
// p = 1/(1-d), X = (u/d)|r|^(1-d).
double majorant_tail_closed(const levy::LevyModel& m, double d, double r, double u);

// Relative slack for comparing a quadrature against a closed form; some
// bounds hold with equality (e.g. C3 when nu has no mass beyond X).
inline constexpr double kCompareRelTol = 1e-6;

struct BoundValue {
  double lhs = 0.0;
  double rhs = 0.0;
  double error = 0.0;   // quadrature error estimate of lhs
  bool capped = false;  // refinement limit reached with an error that matters at this rhs
  bool holds() const noexcept { return lhs <= rhs * (1.0 + kCompareRelTol); }
};

// int_0^a u nu_{r,t}([u,inf)) du against its closed bound, lhs through the majorant
// with the u integral taken inside.
BoundValue bound_c2(const levy::LevyModel& m, double d, double r, double a);
// int_a^inf nu_{r,t}([u,inf)) du against its closed bound; lhs through the majorant.
BoundValue bound_c3(const levy::LevyModel& m, double d, double r, double a);
// Same with the exact tail at a fixed t.
BoundValue bound_c2_at(const levy::LevyModel& m, double d, double r, double a, double t);
BoundValue bound_c3_at(const levy::LevyModel& m, double d, double r, double a, double t);

double c2_rhs(const levy::LevyModel& m, double d, double r, double a);
double c3_rhs(const levy::LevyModel& m, double d, double r, double a);

// sqrt(E L(1)^2) / Gamma(d) * int_0^inf [u^(d-1) - (b+u)^(d-1)] u^(1/2) du,
// a bound on the expected total variation of F_d over [0, b].
double fd_tv_bound(const levy::LevyModel& m, double d, double b);
// The integral alone.
double fd_kernel_integral(double d, double b);

// |r| nu([|r|^(1-d), inf)) and |r|^d int_{x >= |r|^(1-d) eps / (2d)} x nu(dx).
double vanishing_tail_mass(const levy::LevyModel& m, double d, double r);
double vanishing_tail_mean(const levy::LevyModel& m, double d, double r, double eps);

nlohmann::json to_json(const BoundValue& b);

}  // namespace flevy::idbounds
