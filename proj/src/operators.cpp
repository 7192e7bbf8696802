#include "pwell/operators.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace pwell {

void SymTridiag::apply(const std::vector<double>& x, std::vector<double>& y) const {
  const std::size_t n = size();
  assert(x.size() == n);
  y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += off[i - 1] * x[i - 1];
    if (i + 1 < n) s += off[i] * x[i + 1];
    y[i] = s;
  }
}

std::vector<double> SymTridiag::apply(const std::vector<double>& x) const {
  std::vector<double> y;
  apply(x, y);
  return y;
}

double SymTridiag::quad_form(const std::vector<double>& x) const {
  return bilinear(x, x);
}

double SymTridiag::bilinear(const std::vector<double>& x, const std::vector<double>& y) const {
  const std::size_t n = size();
  assert(x.size() == n && y.size() == n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += diag[i] * x[i] * y[i];
  for (std::size_t i = 0; i + 1 < n; ++i) s += off[i] * (x[i] * y[i + 1] + x[i + 1] * y[i]);
  return s;
}

SymTridiag& SymTridiag::add_scaled(const SymTridiag& other, double c) {
  assert(other.size() == size());
  for (std::size_t i = 0; i < diag.size(); ++i) diag[i] += c * other.diag[i];
  for (std::size_t i = 0; i < off.size(); ++i) off[i] += c * other.off[i];
  return *this;
}

std::optional<std::vector<double>> solve_tridiag(const SymTridiag& A, const std::vector<double>& b) {
  const std::size_t n = A.size();
  if (b.size() != n) throw std::invalid_argument("solve_tridiag: dimension mismatch");
  if (n == 0) return std::vector<double>{};

  std::vector<double> c_prime(n, 0.0);
  std::vector<double> x(n, 0.0);

  double pivot = A.diag[0];
  if (!std::isfinite(pivot) || std::abs(pivot) < 1e-300) return std::nullopt;
  if (n > 1) c_prime[0] = A.off[0] / pivot;
  x[0] = b[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    const double lower = A.off[i - 1];
    pivot = A.diag[i] - lower * c_prime[i - 1];
    if (!std::isfinite(pivot) || std::abs(pivot) < 1e-300) return std::nullopt;
    if (i + 1 < n) c_prime[i] = A.off[i] / pivot;
    x[i] = (b[i] - lower * x[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] -= c_prime[i] * x[i + 1];
  }
  for (double v : x) {
    if (!std::isfinite(v)) return std::nullopt;
  }
  return x;
}

DiscreteOperators assemble(const Mesh1D& mesh, const ProblemParams& params) {
  const std::size_t n_el = mesh.n_elements();
  if (n_el < 2) throw std::invalid_argument("assemble: mesh must have >= 2 elements");
  if (!(params.a > 0.0)) throw std::invalid_argument("assemble: a must be > 0");

  const std::size_t n = mesh.n_free();
  DiscreteOperators ops;
  ops.mesh = mesh;
  ops.M = SymTridiag::zeros(n);
  ops.K = SymTridiag::zeros(n);
  ops.gamma1_index = n - 1;
  ops.a = params.a;
  ops.boundary_mass = 1.0 / params.a;
  ops.source_rule = lp_rule(params.p);

  // Element e spans mesh nodes (e, e+1) = free nodes (e-1, e); element 0
  // touches only free node 0 because mesh node 0 is Dirichlet.
  for (std::size_t e = 0; e < n_el; ++e) {
    const double h = mesh.element_sizes[e];
    const double k_loc = 1.0 / h;
    const double m_diag = h / 3.0;
    const double m_off = h / 6.0;
    if (e == 0) {
      ops.K.diag[0] += k_loc;
      ops.M.diag[0] += m_diag;
    } else {
      const std::size_t i = e - 1;
      ops.K.diag[i] += k_loc;
      ops.K.diag[i + 1] += k_loc;
      ops.K.off[i] += -k_loc;
      ops.M.diag[i] += m_diag;
      ops.M.diag[i + 1] += m_diag;
      ops.M.off[i] += m_off;
    }
  }
  return ops;
}

} // namespace pwell
