#include "dou/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dou/error.hpp"

namespace dou {

namespace special {

namespace {

constexpr double kEps = 1e-15;
constexpr int kMaxIter = 500;

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  const double tiny = 1e-300;
  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

// Lower regularized incomplete gamma P(a, x) by series, for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

// Upper regularized incomplete gamma Q(a, x) by continued fraction, x >= a+1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h * std::exp(-x + a * std::log(x) - log_gamma(a));
}

}  // namespace

double log_gamma(double x) {
  // Lanczos, g = 7, n = 9 (Godfrey's coefficients).
  static constexpr double kCoef[9] = {
      0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
      771.32342877765313,       -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // Reflection for the left half-plane.
    return std::log(M_PI / std::sin(M_PI * x)) - log_gamma(1.0 - x);
  }
  double z = x - 1.0;
  double a = kCoef[0];
  for (int i = 1; i < 9; ++i) a += kCoef[i] / (z + i);
  double t = z + 7.5;
  return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t +
         std::log(a);
}

double reg_inc_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw Error("reg_inc_beta: a, b must be > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double front = std::exp(log_gamma(a + b) - log_gamma(a) - log_gamma(b) +
                          a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double reg_inc_gamma_upper(double a, double x) {
  if (a <= 0.0) throw Error("reg_inc_gamma_upper: a must be > 0");
  if (x < 0.0) throw Error("reg_inc_gamma_upper: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

}  // namespace special

namespace {

double clamp_p(double p) { return std::min(1.0, std::max(0.0, p)); }

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

// Unbiased sample variance.
double variance_of(const std::vector<double>& v, double mean) {
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

void require_finite(const std::vector<double>& v, const char* who) {
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(std::string(who) + ": non-finite value");
  }
}

TestResult finish(TestResult r) {
  r.p_value = clamp_p(r.p_value);
  r.significance = significance(r.p_value);
  return r;
}

// Midranks over the pooled sample; also accumulates sum(t^3 - t) over ties.
std::vector<double> midranks(const std::vector<double>& pooled,
                             double* tie_term) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return pooled[i] < pooled[j];
  });
  std::vector<double> ranks(n);
  *tie_term = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && pooled[order[j]] == pooled[order[i]]) ++j;
    double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    double t = static_cast<double>(j - i);
    *tie_term += t * t * t - t;
    i = j;
  }
  return ranks;
}

}  // namespace

Significance significance(double p) {
  if (p < 1e-10) return Significance::double_star;
  if (p <= 0.05) return Significance::star;
  return Significance::ns;
}

const char* significance_marker(Significance s) {
  switch (s) {
    case Significance::ns:
      return "";
    case Significance::star:
      return "*";
    case Significance::double_star:
      return "**";
  }
  return "";
}

double tail_probability(TailKind kind, double statistic, double df1,
                        double df2) {
  switch (kind) {
    case TailKind::t: {
      if (df1 <= 0.0) throw Error("tail_probability: t df must be > 0");
      if (std::isinf(statistic)) return statistic > 0 ? 0.0 : 1.0;
      double x = df1 / (df1 + statistic * statistic);
      double half_two_sided = 0.5 * special::reg_inc_beta(df1 / 2.0, 0.5, x);
      return statistic >= 0.0 ? half_two_sided : 1.0 - half_two_sided;
    }
    case TailKind::f: {
      if (df1 <= 0.0 || df2 <= 0.0) {
        throw Error("tail_probability: F dfs must be > 0");
      }
      if (std::isinf(statistic)) return 0.0;
      if (statistic <= 0.0) return 1.0;
      double x = df2 / (df2 + df1 * statistic);
      return special::reg_inc_beta(df2 / 2.0, df1 / 2.0, x);
    }
    case TailKind::chi2: {
      if (df1 <= 0.0) throw Error("tail_probability: chi2 df must be > 0");
      if (std::isinf(statistic)) return 0.0;
      if (statistic <= 0.0) return 1.0;
      return special::reg_inc_gamma_upper(df1 / 2.0, statistic / 2.0);
    }
  }
  throw Error("tail_probability: unknown kind");
}

TestResult t_test(const std::vector<double>& x, const std::vector<double>& y,
                  TVariant variant) {
  if (x.size() < 2 || y.size() < 2) throw Error("t_test: sample too small");
  require_finite(x, "t_test");
  require_finite(y, "t_test");

  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  const double mx = mean_of(x);
  const double my = mean_of(y);
  const double vx = variance_of(x, mx);
  const double vy = variance_of(y, my);

  TestResult r;
  r.kind = StatKind::t;

  double se;
  if (variant == TVariant::pooled) {
    double pooled = ((nx - 1.0) * vx + (ny - 1.0) * vy) / (nx + ny - 2.0);
    se = std::sqrt(pooled * (1.0 / nx + 1.0 / ny));
    r.df1 = nx + ny - 2.0;
  } else {
    double a = vx / nx;
    double b = vy / ny;
    se = std::sqrt(a + b);
    r.df1 = (a + b) * (a + b) /
            (a * a / (nx - 1.0) + b * b / (ny - 1.0));
    if (!std::isfinite(r.df1)) r.df1 = nx + ny - 2.0;  // both variances zero
  }

  if (se == 0.0) {
    if (mx == my) {
      r.statistic = 0.0;
      r.p_value = 1.0;
    } else {
      r.statistic = mx > my ? std::numeric_limits<double>::infinity()
                            : -std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
    }
    return finish(r);
  }

  r.statistic = (mx - my) / se;
  r.p_value = 2.0 * tail_probability(TailKind::t, std::fabs(r.statistic),
                                     r.df1);
  return finish(r);
}

TestResult anova_f(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw Error("anova_f: need at least 2 groups");
  std::size_t total = 0;
  for (const auto& g : groups) {
    if (g.empty()) throw Error("anova_f: empty group");
    require_finite(g, "anova_f");
    total += g.size();
  }
  const double k = static_cast<double>(groups.size());
  const double n = static_cast<double>(total);
  if (n - k < 1.0) throw Error("anova_f: within-group df < 1");

  double grand_sum = 0.0;
  for (const auto& g : groups) {
    grand_sum += std::accumulate(g.begin(), g.end(), 0.0);
  }
  const double grand_mean = grand_sum / n;

  double ssb = 0.0;
  double ssw = 0.0;
  for (const auto& g : groups) {
    double m = mean_of(g);
    ssb += static_cast<double>(g.size()) * (m - grand_mean) * (m - grand_mean);
    for (double v : g) ssw += (v - m) * (v - m);
  }

  TestResult r;
  r.kind = StatKind::f;
  r.df1 = k - 1.0;
  r.df2 = n - k;

  const double msb = ssb / (k - 1.0);
  const double msw = ssw / (n - k);
  if (msw == 0.0) {
    if (msb > 0.0) {
      r.statistic = std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
    } else {
      r.statistic = 0.0;
      r.p_value = 1.0;
    }
    return finish(r);
  }
  r.statistic = msb / msw;
  r.p_value = tail_probability(TailKind::f, r.statistic, r.df1, *r.df2);
  return finish(r);
}

TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) {
    throw Error("kruskal_wallis: need at least 2 groups");
  }
  std::vector<double> pooled;
  for (const auto& g : groups) {
    if (g.empty()) throw Error("kruskal_wallis: empty group");
    require_finite(g, "kruskal_wallis");
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  const std::size_t n_total = pooled.size();
  if (n_total < 3) throw Error("kruskal_wallis: need at least 3 values");

  double tie_term = 0.0;
  std::vector<double> ranks = midranks(pooled, &tie_term);

  const double n = static_cast<double>(n_total);
  TestResult r;
  r.kind = StatKind::h;
  r.df1 = static_cast<double>(groups.size()) - 1.0;

  const double correction = 1.0 - tie_term / (n * n * n - n);
  if (correction <= 0.0) {
    // Every value identical: H is undefined, fixed to 0 by convention.
    r.statistic = 0.0;
    r.p_value = 1.0;
    return finish(r);
  }

  double stat = 0.0;
  std::size_t offset = 0;
  for (const auto& g : groups) {
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) rank_sum += ranks[offset + i];
    offset += g.size();
    stat += rank_sum * rank_sum / static_cast<double>(g.size());
  }
  stat = 12.0 / (n * (n + 1.0)) * stat - 3.0 * (n + 1.0);
  r.statistic = stat / correction;
  r.p_value = tail_probability(TailKind::chi2, r.statistic, r.df1);
  return finish(r);
}

double f_critical(double alpha, double df1, double df2) {
  if (alpha <= 0.0 || alpha >= 1.0) throw Error("f_critical: alpha in (0,1)");
  double lo = 0.0;
  double hi = 1.0;
  while (tail_probability(TailKind::f, hi, df1, df2) > alpha) {
    hi *= 2.0;
    if (hi > 1e12) break;
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (tail_probability(TailKind::f, mid, df1, df2) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace dou
