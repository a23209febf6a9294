#include "confinv/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "confinv/error.hpp"

namespace confinv {

long long QuadratureGrid::size() const {
  long long s = 1;
  for (int r : resolution) s *= r;
  return s;
}

Eigen::VectorXd QuadratureGrid::node(long long k) const {
  const int d = dim();
  Eigen::VectorXd u(d);
  for (int i = d - 1; i >= 0; --i) {
    const long long r = resolution[size_t(i)];
    u[i] = nodes[size_t(i)][size_t(k % r)];
    k /= r;
  }
  return u;
}

double QuadratureGrid::weight(long long k) const {
  const int d = dim();
  double w = 1.0;
  for (int i = d - 1; i >= 0; --i) {
    const long long r = resolution[size_t(i)];
    w *= weights[size_t(i)][size_t(k % r)];
    k /= r;
  }
  return w;
}

std::string QuadratureGrid::node_label(long long k) const {
  const Eigen::VectorXd u = node(k);
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < u.size(); ++i) {
    if (i) os << ", ";
    os << "u" << (i + 1) << "=" << u[i];
  }
  os << ")";
  return os.str();
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double lo,
                                                                   double hi) {
  if (n < 1) throw InputError("gauss_legendre needs at least one node");
  const size_t nn = size_t(n);
  std::vector<double> x(nn), w(nn);
  // Newton iteration on P_n from the Chebyshev-like initial guess; the
  // recurrence also yields P_n' for the weight formula.
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / pp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[size_t(i)] = t;
    w[size_t(i)] = 2.0 / ((1.0 - t * t) * pp * pp);
  }
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (int i = 0; i < n; ++i) {
    x[size_t(i)] = mid + half * x[size_t(i)];
    w[size_t(i)] *= half;
  }
  // Newton's initial guess orders roots descending; flip to ascending.
  for (int i = 0, j = n - 1; i < j; ++i, --j) {
    std::swap(x[size_t(i)], x[size_t(j)]);
    std::swap(w[size_t(i)], w[size_t(j)]);
  }
  return {x, w};
}

QuadratureGrid build_grid(const std::vector<DomainAxis>& domain,
                          const std::vector<int>& resolution) {
  if (domain.empty()) throw InputError("empty domain");
  if (resolution.size() != domain.size())
    throw InputError("resolution must give one count per domain dimension");
  QuadratureGrid grid;
  grid.resolution = resolution;
  for (size_t i = 0; i < domain.size(); ++i) {
    const int n = resolution[i];
    if (n < 3) {
      std::ostringstream os;
      os << "resolution " << n << " in dimension " << (i + 1)
         << " is too small (need at least 3)";
      throw InputError(os.str());
    }
    const DomainAxis& ax = domain[i];
    if (!(ax.hi > ax.lo)) throw InputError("domain axis has nonpositive length");
    if (ax.periodic) {
      const double h = ax.length() / n;
      std::vector<double> x(static_cast<size_t>(n));
      std::vector<double> w(static_cast<size_t>(n), h);
      for (int k = 0; k < n; ++k) x[size_t(k)] = ax.lo + h * k;
      grid.nodes.push_back(std::move(x));
      grid.weights.push_back(std::move(w));
    } else {
      auto [x, w] = gauss_legendre(n, ax.lo, ax.hi);
      grid.nodes.push_back(std::move(x));
      grid.weights.push_back(std::move(w));
    }
  }
  return grid;
}

std::vector<int> default_resolution(int m) {
  if (m == 2) return {48, 48};
  if (m == 4) return {16, 16, 16, 16};
  // No shipped surface needs other dimensions; pick a safe middle ground.
  return std::vector<int>(size_t(m), 12);
}

std::vector<int> clamp_resolution(int m, std::vector<int> resolution) {
  if (m == 4)
    for (int& r : resolution) r = std::min(r, 24);
  return resolution;
}

QuadratureGrid default_grid(const Immersion& f) {
  return build_grid(f.domain, default_resolution(f.m));
}

double integrate(const Immersion& f, const AmbientMetric& amb, const QuadratureGrid& grid,
                 const std::function<double(const PointFrame&)>& integrand) {
  if (grid.dim() != f.m) throw InputError("grid dimension does not match the chart");
  double total = 0.0;
  const long long n = grid.size();
  for (long long k = 0; k < n; ++k) {
    try {
      const PointFrame fr = frame_at(f, amb, grid.node(k));
      total += grid.weight(k) * integrand(fr) * fr.sqrt_det_g;
    } catch (const NumericError& e) {
      throw NumericError(std::string(e.what()) + " at node " + grid.node_label(k));
    }
  }
  return total;
}

double surface_area(const Immersion& f, const AmbientMetric& amb,
                    const QuadratureGrid& grid) {
  return integrate(f, amb, grid, [](const PointFrame&) { return 1.0; });
}

}  // namespace confinv
