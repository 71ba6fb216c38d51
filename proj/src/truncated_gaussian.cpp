#include "pcad/truncated_gaussian.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace pcad {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1/sqrt(2*pi)

double standard_normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z * std::numbers::sqrt2_v<double> / 2.0); }

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule, on
// [-1, 1]. Standard tabulated values.
constexpr double kKronrodNodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr double kKronrodWeights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double kGaussWeights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
    0.381830050505119, 0.279705391489277, 0.129484966168870};

struct PanelResult {
  double integral;
  double error;
};

PanelResult gauss_kronrod_panel(const std::function<double(double)>& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double kronrod = 0.0, gauss = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double fx = f(mid + half * kKronrodNodes[i]);
    kronrod += kKronrodWeights[i] * fx;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fx;
  }
  kronrod *= half;
  gauss *= half;
  const double diff = std::abs(kronrod - gauss);
  // Standard QUADPACK-style error sharpening.
  const double err = diff > 0.0 ? diff * std::min(1.0, std::pow(200.0 * diff / std::max(std::abs(kronrod), 1e-300), 1.5))
                                : 0.0;
  return {kronrod, std::max(err, diff * 1e-6)};
}

}  // namespace

double truncated_normal_pdf(double x, double sigma, double lo, double hi) {
  if (!(sigma > 0.0)) throw std::invalid_argument("truncated_normal_pdf: sigma must be > 0");
  if (!(lo < hi)) throw std::invalid_argument("truncated_normal_pdf: empty support");
  if (x < lo || x > hi) return 0.0;
  const double z = standard_normal_cdf(hi / sigma) - standard_normal_cdf(lo / sigma);
  return standard_normal_pdf(x / sigma) / (sigma * z);
}

double truncated_half_normal_mean(double sigma, double hi) {
  if (!(sigma > 0.0) || !(hi > 0.0)) throw std::invalid_argument("truncated_half_normal_mean: bad args");
  const double h = hi / sigma;
  // E = sigma * (1 - exp(-h^2/2)) / (sqrt(pi/2) * erf(h/sqrt(2)))
  const double num = 1.0 - std::exp(-0.5 * h * h);
  const double den = std::sqrt(std::numbers::pi_v<double> / 2.0) * std::erf(h / std::numbers::sqrt2_v<double>);
  return sigma * num / den;
}

double ray_exit_length(const Vec2& direction, const VelocityBounds& bounds) {
  if (direction.x == 0.0 && direction.y == 0.0)
    throw std::invalid_argument("ray_exit_length: zero direction");
  double l = std::numeric_limits<double>::infinity();
  if (direction.x > 0.0) l = std::min(l, bounds.forward / direction.x);
  if (direction.x < 0.0) l = std::min(l, bounds.backward / direction.x);
  if (direction.y > 0.0) l = std::min(l, bounds.left / direction.y);
  if (direction.y < 0.0) l = std::min(l, bounds.right / direction.y);
  return l;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol) {
  if (a == b) return 0.0;
  struct Interval {
    double a, b, integral, error;
  };
  PanelResult whole = gauss_kronrod_panel(f, a, b);
  std::vector<Interval> stack{{a, b, whole.integral, whole.error}};
  double total = whole.integral;
  double total_err = whole.error;
  int iterations = 0;
  constexpr int kMaxIterations = 2000;
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total)) && iterations++ < kMaxIterations) {
    // Split the interval with the largest error estimate.
    size_t worst = 0;
    for (size_t i = 1; i < stack.size(); ++i)
      if (stack[i].error > stack[worst].error) worst = i;
    const Interval iv = stack[worst];
    const double mid = 0.5 * (iv.a + iv.b);
    if (mid == iv.a || mid == iv.b) break;  // interval at floating-point resolution
    const PanelResult left = gauss_kronrod_panel(f, iv.a, mid);
    const PanelResult right = gauss_kronrod_panel(f, mid, iv.b);
    total += left.integral + right.integral - iv.integral;
    total_err += left.error + right.error - iv.error;
    stack[worst] = {iv.a, mid, left.integral, left.error};
    stack.push_back({mid, iv.b, right.integral, right.error});
  }
  return total;
}

double imaginary_speed_expectation(const Vec2& direction, double sigma_x, double sigma_y,
                                   const VelocityBounds& bounds) {
  const double n = norm(direction);
  if (!(std::abs(n - 1.0) < 1e-9)) throw std::invalid_argument("imaginary_speed_expectation: direction must be unit");
  // Axes the ray actually moves along. A zero sigma on a used axis pins the
  // density to l = 0: the conditional expectation collapses to zero.
  const bool use_x = direction.x != 0.0;
  const bool use_y = direction.y != 0.0;
  if ((use_x && sigma_x == 0.0) || (use_y && sigma_y == 0.0)) return 0.0;

  const double L = ray_exit_length(direction, bounds);
  const auto density = [&](double l) {
    double f = 1.0;
    if (use_x) f *= truncated_normal_pdf(l * direction.x, sigma_x, bounds.backward, bounds.forward);
    if (use_y) f *= truncated_normal_pdf(l * direction.y, sigma_y, bounds.right, bounds.left);
    return f;
  };

  // Characteristic decay scale of the ray density, to seed the subdivision
  // when L is much longer than the Gaussian support.
  double kappa_sq = 0.0;
  if (use_x) kappa_sq += (direction.x / sigma_x) * (direction.x / sigma_x);
  if (use_y) kappa_sq += (direction.y / sigma_y) * (direction.y / sigma_y);
  const double scale = std::min(L, 8.0 / std::sqrt(kappa_sq));

  const auto integrate_split = [&](const std::function<double(double)>& f) {
    double v = integrate_adaptive(f, 0.0, scale);
    if (scale < L) v += integrate_adaptive(f, scale, L);
    return v;
  };
  const double den = integrate_split(density);
  if (!(den > 0.0)) return 0.0;
  const double num = integrate_split([&](double l) { return l * density(l); });
  return num / den;
}

}  // namespace pcad
