#include "circreg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "circreg/error.hpp"

namespace circreg {

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), ErrorKind::InvalidParameter, "fit_line: size mismatch");
  require(x.size() >= 2, ErrorKind::InsufficientData, "fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = mean(x), my = mean(y);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0, ErrorKind::InsufficientData, "fit_line: abscissae are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - f.intercept - f.slope * x[i];
    sse += r * r;
  }
  f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
  if (x.size() > 2) {
    double s2 = sse / (n - 2);
    f.slope_stderr = std::sqrt(s2 / sxx);
    f.intercept_stderr = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  }
  return f;
}

QuadraticFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), ErrorKind::InvalidParameter, "fit_quadratic: size mismatch");
  require(x.size() >= 3, ErrorKind::InsufficientData, "fit_quadratic: need at least three points");
  // Normal equations on centred abscissae for conditioning.
  const double mx = mean(x);
  double s[5] = {0, 0, 0, 0, 0}, t[3] = {0, 0, 0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    double u = x[i] - mx, p = 1;
    for (int k = 0; k < 5; ++k) {
      s[k] += p;
      if (k < 3) t[k] += p * y[i];
      p *= u;
    }
  }
  double a[3][4] = {{s[0], s[1], s[2], t[0]}, {s[1], s[2], s[3], t[1]}, {s[2], s[3], s[4], t[2]}};
  double inv[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  double m[3][3] = {{s[0], s[1], s[2]}, {s[1], s[2], s[3]}, {s[2], s[3], s[4]}};
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    require(std::abs(m[piv][c]) > 1e-300, ErrorKind::InsufficientData, "fit_quadratic: singular design");
    std::swap(m[c], m[piv]);
    std::swap(inv[c], inv[piv]);
    std::swap(a[c], a[piv]);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      double f = m[r][c] / m[c][c];
      for (int k = 0; k < 3; ++k) {
        m[r][k] -= f * m[c][k];
        inv[r][k] -= f * inv[c][k];
      }
      for (int k = 0; k < 4; ++k) a[r][k] -= f * a[c][k];
    }
  }
  double b[3];
  for (int r = 0; r < 3; ++r) {
    b[r] = a[r][3] / m[r][r];
    for (int k = 0; k < 3; ++k) inv[r][k] /= m[r][r];
  }
  QuadraticFit f;
  f.c2 = b[2];
  f.c1 = b[1] - 2 * b[2] * mx;
  f.c0 = b[0] - b[1] * mx + b[2] * mx * mx;
  if (x.size() > 3) {
    double sse = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double r = y[i] - (f.c0 + f.c1 * x[i] + f.c2 * x[i] * x[i]);
      sse += r * r;
    }
    f.c2_stderr = std::sqrt(sse / (static_cast<double>(x.size()) - 3) * inv[2][2]);
  }
  return f;
}

double mean(const std::vector<double>& v) {
  require(!v.empty(), ErrorKind::InsufficientData, "mean of empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  require(v.size() >= 2, ErrorKind::InsufficientData, "variance needs two values");
  double m = mean(v), s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double median(std::vector<double> v) {
  require(!v.empty(), ErrorKind::InsufficientData, "median of empty sample");
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Interval wilson_interval(double proportion, double n, double z) {
  require(n > 0, ErrorKind::InsufficientData, "wilson interval with no samples");
  const double z2 = z * z;
  const double denom = 1 + z2 / n;
  const double centre = (proportion + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(std::max(0.0, proportion * (1 - proportion) / n + z2 / (4 * n * n))) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double block_jackknife_stderr(const std::vector<double>& series, std::size_t blocks) {
  require(blocks >= 2 && series.size() >= blocks, ErrorKind::InsufficientData,
          "block jackknife needs at least two non-empty blocks");
  const std::size_t len = series.size() / blocks;
  std::vector<double> means;
  double total = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    double s = 0;
    for (std::size_t i = b * len; i < (b + 1) * len; ++i) s += series[i];
    means.push_back(s / static_cast<double>(len));
    total += s;
  }
  const double nb = static_cast<double>(blocks);
  double full = total / (nb * static_cast<double>(len)), acc = 0;
  for (double m : means) {
    double loo = (full * nb - m) / (nb - 1);
    acc += (loo - full) * (loo - full);
  }
  return std::sqrt((nb - 1) / nb * acc);
}

double integrated_autocorrelation(const std::vector<double>& series) {
  const std::size_t n = series.size();
  require(n >= 4, ErrorKind::InsufficientData, "autocorrelation needs at least four values");
  const double m = mean(series);
  double c0 = 0;
  for (double x : series) c0 += (x - m) * (x - m);
  c0 /= static_cast<double>(n);
  if (c0 <= 0) return 1.0;
  auto rho = [&](std::size_t lag) {
    double c = 0;
    for (std::size_t i = 0; i + lag < n; ++i) c += (series[i] - m) * (series[i + lag] - m);
    return c / static_cast<double>(n) / c0;
  };
  double tau = -1.0;  // pairs Gamma_k = rho_{2k} + rho_{2k+1}; tau = -1 + 2 sum Gamma_k
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    double g = rho(2 * k) + rho(2 * k + 1);
    if (g <= 0) break;
    g = std::min(g, prev);  // initial monotone sequence
    prev = g;
    tau += 2 * g;
  }
  return std::max(tau, 1.0 / static_cast<double>(n));
}

double effective_sample_size(const std::vector<double>& series) {
  return static_cast<double>(series.size()) / std::max(1.0, integrated_autocorrelation(series));
}

double gelman_rubin(const std::vector<std::vector<double>>& chains) {
  require(chains.size() >= 2, ErrorKind::InsufficientData, "R-hat needs at least two chains");
  std::size_t n = chains.front().size();
  for (const auto& c : chains) n = std::min(n, c.size());
  require(n >= 2, ErrorKind::InsufficientData, "R-hat needs at least two draws per chain");
  std::vector<double> means, vars;
  for (const auto& c : chains) {
    std::vector<double> head(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(n));
    means.push_back(mean(head));
    vars.push_back(variance(head));
  }
  const double w = mean(vars);
  const double b = static_cast<double>(n) * variance(means);
  if (w <= 0) return b <= 0 ? 1.0 : std::numeric_limits<double>::infinity();
  const double vhat = (static_cast<double>(n) - 1) / static_cast<double>(n) * w + b / static_cast<double>(n);
  return std::sqrt(vhat / w);
}

Interval bootstrap_median_interval(const std::vector<double>& values, Rng& rng, std::size_t reps, double level) {
  require(!values.empty(), ErrorKind::InsufficientData, "bootstrap of empty sample");
  std::vector<double> meds(reps), draw(values.size());
  for (std::size_t r = 0; r < reps; ++r) {
    for (auto& d : draw) d = values[rng.below(values.size())];
    meds[r] = median(draw);
  }
  std::sort(meds.begin(), meds.end());
  const double a = (1 - level) / 2;
  auto at = [&](double f) {
    std::size_t i = static_cast<std::size_t>(std::floor(f * static_cast<double>(reps - 1)));
    return meds[std::min(i, reps - 1)];
  };
  return {at(a), at(1 - a)};
}

}  // namespace circreg
