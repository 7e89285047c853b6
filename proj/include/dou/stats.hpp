#pragma once

#include <optional>
#include <vector>

namespace dou {

enum class StatKind { t, f, h };
enum class Significance { ns, star, double_star };

struct TestResult {
  StatKind kind = StatKind::t;
  double statistic = 0.0;
  double df1 = 0.0;
  std::optional<double> df2;  // second df for F
  double p_value = 1.0;
  Significance significance = Significance::ns;
};

enum class TVariant { pooled, welch };

// Independent two-sample t. Pooled (Student) variance by default; Welch with
// Welch-Satterthwaite df on request. Two-sided p. Degenerate inputs follow
// fixed conventions: zero variance with equal means -> t=0, p=1; zero
// variance with unequal means -> t=+/-inf, p=0.
TestResult t_test(const std::vector<double>& x, const std::vector<double>& y,
                  TVariant variant = TVariant::pooled);

// One-way ANOVA. F = MSB/MSW with df (k-1, N-k).
TestResult anova_f(const std::vector<std::vector<double>>& groups);

// Kruskal-Wallis H over midranks with tie correction; p from the chi-square
// tail with df = k-1. All values identical -> H=0, p=1 by convention.
TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

enum class TailKind { t, f, chi2 };

// Upper-tail probability P(X >= x). t and F go through the regularized
// incomplete beta, chi-square through the regularized incomplete gamma.
// Absolute error <= 1e-10 for df <= 1e4 (checked against a frozen
// high-precision table in the acceptance suite).
double tail_probability(TailKind kind, double statistic, double df1,
                        double df2 = 0.0);

// Report marker coding: p < 1e-10 -> **, 1e-10 <= p <= 0.05 -> *, else ns.
Significance significance(double p);
const char* significance_marker(Significance s);

// Smallest F with upper-tail probability alpha, by bisection. Used for the
// optional critical-value column in structured output.
double f_critical(double alpha, double df1, double df2);

namespace special {

// Lanczos approximation (g=7, 9 terms), |rel err| < 1e-13 for x > 0.
double log_gamma(double x);

// Regularized incomplete beta I_x(a, b), Lentz continued fraction.
double reg_inc_beta(double a, double b, double x);

// Regularized upper incomplete gamma Q(a, x), series/continued fraction.
double reg_inc_gamma_upper(double a, double x);

}  // namespace special

}  // namespace dou
