#include "mnl/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace mnl {

namespace {

// Kronrod abscissae on [0, 1); odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  QuadratureResult r;
  bool operator<(const Panel& o) const { return r.error < o.r.error; }
};

}  // namespace

QuadratureResult gauss_kronrod15(const RealFunction& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  QuadratureResult out;
  out.value = kronrod * half;
  out.error = std::abs((kronrod - gauss) * half);
  out.evaluations = 15;
  out.converged = true;
  return out;
}

QuadratureResult integrate_adaptive(const RealFunction& f, std::span<const double> breaks, double rel_tol,
                                    double abs_tol, std::size_t max_panels) {
  if (breaks.size() < 2) throw std::invalid_argument("integrate_adaptive needs at least two breakpoints");
  std::priority_queue<Panel> heap;
  QuadratureResult total;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    Panel p{breaks[i], breaks[i + 1], gauss_kronrod15(f, breaks[i], breaks[i + 1])};
    total.value += p.r.value;
    total.error += p.r.error;
    total.evaluations += p.r.evaluations;
    heap.push(p);
  }
  auto done = [&] { return total.error <= std::max(abs_tol, rel_tol * std::abs(total.value)); };
  while (!done() && !heap.empty() && heap.size() < max_panels) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel cannot be split further in double precision.
      heap.push(worst);
      break;
    }
    Panel left{worst.a, mid, gauss_kronrod15(f, worst.a, mid)};
    Panel right{mid, worst.b, gauss_kronrod15(f, mid, worst.b)};
    total.value += left.r.value + right.r.value - worst.r.value;
    total.error += left.r.error + right.r.error - worst.r.error;
    total.evaluations += 30;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of incremental updates.
  double value = 0.0;
  double error = 0.0;
  while (!heap.empty()) {
    value += heap.top().r.value;
    error += heap.top().r.error;
    heap.pop();
  }
  total.value = value;
  total.error = error;
  total.converged = done();
  return total;
}

SearchResult maximize_golden(const RealFunction& f, double a, double b, double x_tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < 200 && (b - a) > x_tol; ++iter) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? SearchResult{c, fc} : SearchResult{d, fd};
}

}  // namespace mnl
