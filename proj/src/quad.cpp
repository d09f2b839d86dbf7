#include "weyldens/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "weyldens/error.hpp"

namespace weyldens::quad {
namespace {

// Kronrod 21-point abscissae (positive half) and weights; the odd-indexed
// abscissae are the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600025117287, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

// QUADPACK qk21 error model: the raw |K21 - G10| difference is sharpened by
// the (200 err / resasc)^1.5 scaling and floored at 50 eps * resabs.
Panel apply_rule(const Integrand& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double abs_half = std::fabs(half);

  std::array<double, 10> f1{};
  std::array<double, 10> f2{};
  const double fc = f(center);
  double kronrod = fc * kWgk[10];
  double gauss = 0.0;
  double resabs = std::fabs(kronrod);

  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double lv = f(center - dx);
    const double rv = f(center + dx);
    f1[j] = lv;
    f2[j] = rv;
    kronrod += kWgk[j] * (lv + rv);
    resabs += kWgk[j] * (std::fabs(lv) + std::fabs(rv));
    if (j % 2 == 1) gauss += kWg[j / 2] * (lv + rv);
  }

  const double mean = 0.5 * kronrod;
  double resasc = kWgk[10] * std::fabs(fc - mean);
  for (std::size_t j = 0; j < 10; ++j) resasc += kWgk[j] * (std::fabs(f1[j] - mean) + std::fabs(f2[j] - mean));

  const double value = kronrod * half;
  resabs *= abs_half;
  resasc *= abs_half;
  double err = std::fabs((kronrod - gauss) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  if (!std::isfinite(value)) fail(ErrorCode::NonConvergence, "integrand produced a non-finite value");
  return {lo, hi, value, err};
}

void check_tolerance(double rel_tol) {
  if (!(rel_tol > 1e-15 && rel_tol < 1e-2)) {
    std::ostringstream msg;
    msg << "rel_tol must lie in (1e-15, 1e-2), got " << rel_tol;
    fail(ErrorCode::InvalidArgument, msg.str());
  }
}

}  // namespace

IntegralResult integrate_finite(const Integrand& f, double lo, double hi, double rel_tol, const Options& opts) {
  check_tolerance(rel_tol);
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    std::ostringstream msg;
    msg << "integrate_finite needs finite lo < hi, got [" << lo << ", " << hi << "]";
    fail(ErrorCode::InvalidArgument, msg.str());
  }

  std::priority_queue<Panel> heap;
  Panel first = apply_rule(f, lo, hi);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  std::size_t evaluations = kRuleSize;

  auto converged = [&] { return total_err <= std::max(rel_tol * std::fabs(total), opts.abs_floor); };

  while (!converged()) {
    if (heap.size() >= opts.panel_limit) {
      std::ostringstream msg;
      msg << "adaptive quadrature hit " << opts.panel_limit << " panels on [" << lo << ", " << hi
          << "] with error " << total_err << " (value " << total << ")";
      fail(ErrorCode::NonConvergence, msg.str());
    }
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(worst.lo < mid && mid < worst.hi)) {
      fail(ErrorCode::NonConvergence, "panel width reached machine resolution before tolerance was met");
    }
    const Panel left = apply_rule(f, worst.lo, mid);
    const Panel right = apply_rule(f, mid, worst.hi);
    evaluations += 2 * kRuleSize;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum from the panels so the running-update drift does not leak into the
  // result.
  double sum = 0.0;
  double err = 0.0;
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
  for (const Panel& p : panels) {
    sum += p.value;
    err += p.error;
  }
  return {sum, err, evaluations};
}

IntegralResult integrate_semiinf(const Integrand& f, double rel_tol, double decay_rate, const Options& opts) {
  check_tolerance(rel_tol);
  if (!(decay_rate > 0.0) || !std::isfinite(decay_rate)) {
    fail(ErrorCode::InvalidDecayHint, "decay_rate must be positive and finite");
  }

  const double t_cap = 1e4 / decay_rate;
  double lo = 0.0;
  double hi = std::min(1.0, 1.0 / decay_rate);
  double prev_edge = std::fabs(f(0.0));
  IntegralResult total{0.0, 0.0, 1};

  while (true) {
    const IntegralResult piece = integrate_finite(f, lo, hi, rel_tol, opts);
    total.value += piece.value;
    total.error_estimate += piece.error_estimate;
    total.evaluations += piece.evaluations + 1;

    const double edge = std::fabs(f(hi));
    const double tail = edge / decay_rate;
    // A truncation point is accepted only where the integrand is not rising.
    if (edge <= prev_edge && (tail <= 0.1 * rel_tol * std::fabs(total.value) || tail <= opts.abs_floor)) {
      total.error_estimate += tail;
      return total;
    }
    prev_edge = edge;
    lo = hi;
    hi *= 2.0;
    if (hi > t_cap) {
      std::ostringstream msg;
      msg << "no truncation point satisfies the decay hint " << decay_rate << " below t = " << t_cap;
      fail(ErrorCode::InvalidDecayHint, msg.str());
    }
  }
}

}  // namespace weyldens::quad
