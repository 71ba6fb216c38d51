#include "pcad/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pcad {
namespace {

std::vector<double> clamped(std::vector<double> x, const std::vector<double>& lo,
                            const std::vector<double>& hi) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
  return x;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& start, const std::vector<double>& lower,
                             const std::vector<double>& upper, long max_evals, double f_tol) {
  const std::size_t n = start.size();
  if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");
  if (lower.size() != n || upper.size() != n)
    throw std::invalid_argument("nelder_mead: bound size mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (!(lower[i] < upper[i])) throw std::invalid_argument("nelder_mead: empty box");

  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    return f(x);
  };

  // Initial simplex: the start plus one vertex per axis, stepped by 5% of the
  // box width (stepping down when the start sits at the upper bound).
  std::vector<std::vector<double>> xs;
  xs.push_back(clamped(start, lower, upper));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v = xs[0];
    const double step = 0.05 * (upper[i] - lower[i]);
    v[i] = (v[i] + step <= upper[i]) ? v[i] + step : v[i] - step;
    xs.push_back(v);
  }
  std::vector<double> fs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) fs[i] = eval(xs[i]);

  std::vector<std::size_t> order(xs.size());
  const auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
  };

  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  while (result.evaluations < max_evals) {
    sort_simplex();
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[order.size() - 2];
    if (std::abs(fs[worst] - fs[best]) <= f_tol) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t idx : order)
      if (idx != worst)
        for (std::size_t i = 0; i < n; ++i) centroid[i] += xs[idx][i];
    for (double& c : centroid) c /= static_cast<double>(n);

    const auto blend = [&](double coeff) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = centroid[i] + coeff * (centroid[i] - xs[worst][i]);
      return clamped(std::move(x), lower, upper);
    };

    const std::vector<double> reflected = blend(kReflect);
    const double f_reflected = eval(reflected);
    if (f_reflected < fs[best]) {
      const std::vector<double> expanded = blend(kExpand);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        xs[worst] = expanded;
        fs[worst] = f_expanded;
      } else {
        xs[worst] = reflected;
        fs[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < fs[second_worst]) {
      xs[worst] = reflected;
      fs[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < fs[worst];
    const std::vector<double> contracted = blend(outside ? kContract : -kContract);
    const double f_contracted = eval(contracted);
    if (f_contracted < std::min(f_reflected, fs[worst])) {
      xs[worst] = contracted;
      fs[worst] = f_contracted;
      continue;
    }
    // Shrink towards the best vertex.
    for (std::size_t idx : order) {
      if (idx == best) continue;
      for (std::size_t i = 0; i < n; ++i)
        xs[idx][i] = xs[best][i] + kShrink * (xs[idx][i] - xs[best][i]);
      fs[idx] = eval(xs[idx]);
      if (result.evaluations >= max_evals) break;
    }
  }

  sort_simplex();
  result.x = xs[order.front()];
  result.fx = fs[order.front()];
  return result;
}

}  // namespace pcad
