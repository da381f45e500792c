#include "qnorm/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>

#include "qnorm/kernels.hpp"

namespace qnorm {
namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

constexpr std::size_t kNodes = 15;
constexpr std::size_t kGaussNodes = 7;

// Node layout per panel: the 7 Gauss nodes first, then the 8 Kronrod-only nodes.
struct Rule {
  std::array<double, kNodes> x{};
  std::array<double, kNodes> wk{};
  std::array<double, kGaussNodes> wg{};
};

constexpr Rule make_rule() {
  Rule r;
  std::size_t i = 0;
  // Gauss nodes: xgk[1], xgk[3], xgk[5] (both signs) and the center.
  for (std::size_t j = 0; j < 3; ++j) {
    const std::size_t g = 2 * j + 1;
    r.x[i] = -kXgk[g];
    r.wk[i] = kWgk[g];
    r.wg[i] = kWg[j];
    ++i;
    r.x[i] = kXgk[g];
    r.wk[i] = kWgk[g];
    r.wg[i] = kWg[j];
    ++i;
  }
  r.x[i] = 0.0;
  r.wk[i] = kWgk[7];
  r.wg[i] = kWg[3];
  ++i;
  for (std::size_t j = 0; j < 4; ++j) {
    const std::size_t k = 2 * j;
    r.x[i] = -kXgk[k];
    r.wk[i] = kWgk[k];
    ++i;
    r.x[i] = kXgk[k];
    r.wk[i] = kWgk[k];
    ++i;
  }
  return r;
}

constexpr Rule kRule = make_rule();

struct Panel {
  double a;
  double b;
  double value;
  double err;
};

struct ByError {
  bool operator()(const Panel& l, const Panel& r) const {
    if (l.err != r.err) return l.err < r.err;
    return l.a > r.a;
  }
};

// Evaluates the GK15 pair for every panel in one batch of f evaluations.
class PanelEvaluator {
 public:
  PanelEvaluator(const RadialEval& f, double p) : f_(f), p_(p) {}

  void operator()(std::span<Panel> panels) {
    const std::size_t n = panels.size() * kNodes;
    nodes_.resize(n);
    values_.resize(n);
    wk_.resize(n);
    wg_.resize(panels.size() * kGaussNodes);
    for (std::size_t j = 0; j < panels.size(); ++j) {
      const double c = 0.5 * (panels[j].a + panels[j].b);
      const double h = 0.5 * (panels[j].b - panels[j].a);
      for (std::size_t i = 0; i < kNodes; ++i) nodes_[j * kNodes + i] = c + h * kRule.x[i];
    }
    f_(nodes_, values_);
    for (std::size_t j = 0; j < panels.size(); ++j) {
      const double h = 0.5 * (panels[j].b - panels[j].a);
      for (std::size_t i = 0; i < kNodes; ++i) {
        const double t = nodes_[j * kNodes + i];
        wk_[j * kNodes + i] = 2.0 * t * h * kRule.wk[i];
        if (i < kGaussNodes) wg_[j * kGaussNodes + i] = 2.0 * t * h * kRule.wg[i];
      }
      const std::span<const double> v(values_.data() + j * kNodes, kNodes);
      const double k15 = kernels::weighted_abs_pow_sum(v, std::span<const double>(wk_.data() + j * kNodes, kNodes), p_);
      const double g7 = kernels::weighted_abs_pow_sum(
          v.first(kGaussNodes), std::span<const double>(wg_.data() + j * kGaussNodes, kGaussNodes), p_);
      panels[j].value = k15;
      panels[j].err = std::fabs(k15 - g7);
    }
  }

 private:
  const RadialEval& f_;
  double p_;
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> wk_;
  std::vector<double> wg_;
};

double neumaier_sum(std::span<const double> v) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : v) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

void check_order(double p, double tol) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("norm order p must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

// int_0^R 2t |f(t)|^p dt to within `budget`, cut at the sign changes of f.
IntegralEstimate integrate_truncated(const RadialEval& f, double radius, double p, double budget,
                                     const QuadratureOptions& opt) {
  IntegralEstimate est;
  est.truncation_radius = radius;
  if (radius <= 0.0) return est;

  std::vector<double> cuts{0.0};
  for (double r : locate_sign_changes(f, 0.0, radius, opt.max_roots, opt.scan_points))
    if (r > cuts.back()) cuts.push_back(r);
  if (radius > cuts.back()) cuts.push_back(radius);

  std::vector<Panel> initial;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i]) initial.push_back({cuts[i], cuts[i + 1], 0.0, 0.0});

  PanelEvaluator evaluate(f, p);
  evaluate(initial);

  std::priority_queue<Panel, std::vector<Panel>, ByError> queue(ByError{}, initial);
  double total_err = 0.0;
  for (const auto& pn : initial) total_err += pn.err;

  std::size_t subdivisions = 0;
  std::array<Panel, 2> kids{};
  while (total_err > budget) {
    const Panel worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (subdivisions >= opt.max_subdivisions || !(mid > worst.a && mid < worst.b)) {
      std::vector<double> vals;
      while (!queue.empty()) {
        vals.push_back(queue.top().value);
        queue.pop();
      }
      std::sort(vals.begin(), vals.end());
      est.value = neumaier_sum(vals);
      est.abs_error_bound = total_err;
      est.subdivisions = subdivisions;
      throw QuadratureError("adaptive quadrature budget exhausted before reaching tolerance", est);
    }
    queue.pop();
    kids[0] = {worst.a, mid, 0.0, 0.0};
    kids[1] = {mid, worst.b, 0.0, 0.0};
    evaluate(kids);
    total_err += kids[0].err + kids[1].err - worst.err;
    queue.push(kids[0]);
    queue.push(kids[1]);
    ++subdivisions;
  }

  std::vector<Panel> done;
  done.reserve(queue.size());
  total_err = 0.0;
  while (!queue.empty()) {
    done.push_back(queue.top());
    queue.pop();
  }
  std::sort(done.begin(), done.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
  std::vector<double> vals;
  vals.reserve(done.size());
  for (const auto& pn : done) {
    vals.push_back(pn.value);
    total_err += pn.err;
  }
  est.value = neumaier_sum(vals);
  est.abs_error_bound = total_err;
  est.subdivisions = subdivisions;
  return est;
}

}  // namespace

std::vector<double> locate_sign_changes(const RadialEval& f, double lo, double hi,
                                        std::size_t max_roots, std::size_t scan_points) {
  if (!(hi > lo)) throw std::invalid_argument("sign-change bracket must have hi > lo");
  if (scan_points < 1) throw std::invalid_argument("need at least one scan interval");

  std::vector<double> xs(scan_points + 1);
  std::vector<double> ys(scan_points + 1);
  const double step = (hi - lo) / static_cast<double>(scan_points);
  for (std::size_t i = 0; i <= scan_points; ++i) xs[i] = lo + step * static_cast<double>(i);
  xs.back() = hi;
  f(xs, ys);

  auto eval1 = [&f](double x) {
    const double in[1] = {x};
    double out[1] = {0.0};
    f(in, out);
    return out[0];
  };

  std::vector<double> roots;
  std::size_t last = scan_points + 1;  // index of the last nonzero sample
  for (std::size_t i = 0; i <= scan_points; ++i) {
    if (ys[i] == 0.0) continue;
    if (last <= scan_points && (ys[last] > 0.0) != (ys[i] > 0.0)) {
      if (roots.size() >= max_roots)
        throw RootBudgetError("sign-change budget of " + std::to_string(max_roots) + " exceeded");
      double a = xs[last];
      double b = xs[i];
      const bool a_pos = ys[last] > 0.0;
      while (b - a > 1e-12) {
        const double m = 0.5 * (a + b);
        if (!(m > a && m < b)) break;
        const double fm = eval1(m);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if ((fm > 0.0) == a_pos)
          a = m;
        else
          b = m;
      }
      roots.push_back(0.5 * (a + b));
    }
    last = i;
  }
  return roots;
}

IntegralEstimate integrate_radial_abs_pow(const RadialProfile& f, double p, double tol,
                                          const QuadratureOptions& options) {
  check_order(p, tol);
  const double radius = f.decay.truncation_radius(0.1 * tol);
  const double tail = f.decay.tail(radius);
  IntegralEstimate est;
  try {
    est = integrate_truncated(f.eval, radius, p, tol - tail, options);
  } catch (const QuadratureError& e) {
    IntegralEstimate best = e.best_estimate();
    best.abs_error_bound += tail;
    throw QuadratureError(e.what(), best);
  }
  est.abs_error_bound += tail;
  return est;
}

IntegralEstimate integrate_plane_abs_pow(const PlaneProfile& f, double p, double tol,
                                         const QuadratureOptions& options) {
  check_order(p, tol);
  const PlaneFrame& fr = f.frame;
  if (!(fr.sx > 0.0) || !(fr.sy > 0.0)) throw std::invalid_argument("frame scales must be positive");
  const double jac = fr.sx * fr.sy;
  // Inner errors enter with total weight jac; angular error gets the other half.
  const double ray_tol = 0.5 * tol / jac;
  const double radius = f.decay.truncation_radius(0.1 * ray_tol);
  const double tail = f.decay.tail(radius);
  const double ca = std::cos(fr.angle);
  const double sa = std::sin(fr.angle);

  std::vector<double> xs;
  std::vector<double> ys;
  std::size_t subdivisions = 0;

  auto ray = [&](double phi) {
    const double ux = ca * fr.sx * std::cos(phi) - sa * fr.sy * std::sin(phi);
    const double uy = sa * fr.sx * std::cos(phi) + ca * fr.sy * std::sin(phi);
    RadialEval along = [&, ux, uy](std::span<const double> t, std::span<double> out) {
      xs.resize(t.size());
      ys.resize(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) {
        xs[i] = fr.cx + ux * t[i];
        ys[i] = fr.cy + uy * t[i];
      }
      f.eval(xs, ys, out);
    };
    IntegralEstimate e = integrate_truncated(along, radius, p, ray_tol - tail, options);
    subdivisions += e.subdivisions;
    e.abs_error_bound += tail;
    return e;
  };

  // Periodic trapezoid in the angle; spectrally accurate for smooth I(phi).
  std::vector<double> values;
  std::vector<double> errors;
  std::size_t m = std::max<std::size_t>(options.min_angles, 4);
  for (std::size_t k = 0; k < m; ++k) {
    const auto e = ray(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m));
    values.push_back(e.value);
    errors.push_back(e.abs_error_bound);
  }
  auto trapezoid = [&]() { return jac * neumaier_sum(values) / static_cast<double>(values.size()); };
  auto inner_err = [&]() { return jac * neumaier_sum(errors) / static_cast<double>(errors.size()); };

  double prev = trapezoid();
  while (true) {
    // Insert the midpoints between existing angles.
    std::vector<double> nv(2 * m);
    std::vector<double> ne(2 * m);
    for (std::size_t k = 0; k < m; ++k) {
      nv[2 * k] = values[k];
      ne[2 * k] = errors[k];
      const auto e = ray(2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(m));
      nv[2 * k + 1] = e.value;
      ne[2 * k + 1] = e.abs_error_bound;
    }
    values = std::move(nv);
    errors = std::move(ne);
    m *= 2;
    const double cur = trapezoid();
    const double angular = std::fabs(cur - prev);
    IntegralEstimate est{cur, angular + inner_err(), subdivisions, radius * std::max(fr.sx, fr.sy)};
    if (angular <= 0.5 * tol) return est;
    if (2 * m > options.max_angles)
      throw QuadratureError("angular refinement budget exhausted before reaching tolerance", est);
    prev = cur;
  }
}

}  // namespace qnorm
