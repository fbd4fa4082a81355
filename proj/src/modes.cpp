#include "pairtunnel/modes.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <limits>
#include <random>
#include <sstream>

#include "pairtunnel/bpm.hpp"
#include "pairtunnel/errors.hpp"
#include "pairtunnel/fft.hpp"

namespace pairtunnel {

namespace {

double norm_of(const ComplexField2D& f) { return std::sqrt(integrate(f)); }

void scale(ComplexField2D& f, cplx s) {
  for (auto& v : f.values()) v *= s;
}

// f += s * g
void axpy(ComplexField2D& f, cplx s, const ComplexField2D& g) {
  auto a = f.values();
  const auto b = g.values();
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += s * b[k];
}

// Spectral kinetic operator and its shifted inverse on one grid.
class KineticOperator {
 public:
  KineticOperator(const Grid2D& grid, const PhysicsConstants& constants)
      : grid_(grid), fft_(grid.n()), k2_(grid) {
    const double c = constants.kinetic_coefficient();
    const int n = grid.n();
    for (int i = 0; i < n; ++i) {
      const double ki = grid.wavenumber(i);
      for (int j = 0; j < n; ++j) {
        const double kj = grid.wavenumber(j);
        k2_(i, j) = c * (ki * ki + kj * kj);
        max_ = std::max(max_, k2_(i, j));
      }
    }
  }

  double max_eigenvalue() const { return max_; }

  // T f
  ComplexField2D apply(const ComplexField2D& f) const {
    return filtered(f, [](double t) { return t; });
  }

  // (T + shift)^-1 f
  ComplexField2D precondition(const ComplexField2D& f, double shift) const {
    return filtered(f, [shift](double t) { return 1.0 / (t + shift); });
  }

 private:
  template <class Fn>
  ComplexField2D filtered(const ComplexField2D& f, Fn&& fn) const {
    ComplexField2D out = f;
    fft_.forward(out);
    const double norm = 1.0 / static_cast<double>(grid_.size());
    auto v = out.values();
    const auto t = k2_.values();
    for (std::size_t k = 0; k < v.size(); ++k) v[k] *= fn(t[k]) * norm;
    fft_.inverse(out);
    return out;
  }

  Grid2D grid_;
  Fft2D fft_;
  ScalarField2D k2_;
  double max_ = 0.0;
};

ComplexField2D hamiltonian(const KineticOperator& kin, const ComplexField2D& f,
                           const ScalarField2D& v) {
  ComplexField2D out = kin.apply(f);
  auto o = out.values();
  const auto in = f.values();
  const auto pot = v.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] += pot[k] * in[k];
  return out;
}

void project_out(ComplexField2D& f, const std::vector<GuidedMode>& modes) {
  for (const auto& m : modes) axpy(f, -overlap(m.field, f), m.field);
}

void project_out(ComplexField2D& f, const std::vector<ComplexField2D>& fields) {
  for (const auto& g : fields) axpy(f, -overlap(g, f), g);
}

double boundary_average(const ScalarField2D& v) {
  const int n = v.n();
  double sum = 0.0;
  int count = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == 0 || j == 0 || i == n - 1 || j == n - 1) {
        sum += v(i, j);
        ++count;
      }
    }
  }
  return sum / count;
}

// Centroid of the well depth below the boundary level.
GuideCenter well_centroid(const ScalarField2D& v, double boundary) {
  const auto x = v.grid().coordinates();
  double w_sum = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  for (int i = 0; i < v.n(); ++i) {
    for (int j = 0; j < v.n(); ++j) {
      const double w = std::max(0.0, boundary - v(i, j));
      w_sum += w;
      c1 += w * x[static_cast<std::size_t>(i)];
      c2 += w * x[static_cast<std::size_t>(j)];
    }
  }
  if (w_sum <= 0.0) return {0.0, 0.0};
  return {c1 / w_sum, c2 / w_sum};
}

// Seed k: Gaussian times a fixed low-order polynomial in (u, v) = (x - c) / sigma.
ComplexField2D seed_field(const Grid2D& grid, GuideCenter c, double sigma, int k) {
  static constexpr double table[][6] = {
      // 1, u, v, uv, u^2 - v^2, u^2 + v^2 - 2
      {1.0, 0.0, 0.0, 0.0, 0.0, 0.0},
      {0.05, 1.0, 0.37, 0.11, 0.07, 0.03},
      {0.04, -0.29, 1.0, 0.13, -0.06, 0.05},
      {0.03, 0.09, -0.12, 1.0, 0.31, 0.17},
  };
  std::array<double, 6> coef{};
  if (k < 4) {
    std::copy(std::begin(table[k]), std::end(table[k]), coef.begin());
  } else {
    std::mt19937 gen(12345u + static_cast<unsigned>(k));
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& v : coef) v = dist(gen);
  }
  return ComplexField2D::sample(grid, [&](double x1, double x2) {
    const double u = (x1 - c.x1) / sigma;
    const double v = (x2 - c.x2) / sigma;
    const double g = std::exp(-0.5 * (u * u + v * v));
    const double poly = coef[0] + coef[1] * u + coef[2] * v + coef[3] * u * v +
                        coef[4] * (u * u - v * v) + coef[5] * (u * u + v * v - 2.0);
    return cplx(g * poly, 0.0);
  });
}

void fix_phase(ComplexField2D& f) {
  std::size_t best = 0;
  double best_abs = -1.0;
  const auto v = f.values();
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double a = std::abs(v[k]);
    if (a > best_abs) {
      best_abs = a;
      best = k;
    }
  }
  if (best_abs > 0.0) scale(f, std::conj(v[best]) / best_abs);
}

struct RefineResult {
  ComplexField2D field;
  double mu;
  double residual;
};

// Locally optimal preconditioned iteration on span{x, P r, previous step},
// restricted to the complement of the converged modes.
RefineResult refine(ComplexField2D x, const KineticOperator& kin, const ScalarField2D& v,
                    const std::vector<GuidedMode>& lower, double shift, double target,
                    int max_iters) {
  project_out(x, lower);
  scale(x, 1.0 / norm_of(x));
  ComplexField2D hx = hamiltonian(kin, x, v);
  std::optional<ComplexField2D> p;
  std::optional<ComplexField2D> hp;

  RefineResult best{x, overlap(x, hx).real(), std::numeric_limits<double>::infinity()};
  int since_improvement = 0;
  for (int it = 0; it < max_iters; ++it) {
    if (it % 25 == 24) hx = hamiltonian(kin, x, v);
    const double mu = overlap(x, hx).real();
    ComplexField2D r = hx;
    axpy(r, -mu, x);
    project_out(r, lower);
    const double res = norm_of(r);
    if (res < 0.98 * best.residual) {
      best = {x, mu, res};
      since_improvement = 0;
    } else if (++since_improvement > 40) {
      break;
    }
    if (res <= target) break;

    // Orthonormal basis {x, w, p} with tracked H images.
    std::vector<ComplexField2D> basis{x};
    std::vector<ComplexField2D> hbasis{hx};
    auto add = [&](ComplexField2D f, ComplexField2D hf) {
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t b = 0; b < basis.size(); ++b) {
          const cplx c = overlap(basis[b], f);
          axpy(f, -c, basis[b]);
          axpy(hf, -c, hbasis[b]);
        }
      }
      const double nf = norm_of(f);
      if (nf < 1e-12) return;
      scale(f, 1.0 / nf);
      scale(hf, 1.0 / nf);
      basis.push_back(std::move(f));
      hbasis.push_back(std::move(hf));
    };
    {
      ComplexField2D w = kin.precondition(r, shift);
      project_out(w, lower);
      ComplexField2D hw = hamiltonian(kin, w, v);
      add(std::move(w), std::move(hw));
    }
    if (p) add(*p, *hp);

    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j)
        a(i, j) = overlap(basis[static_cast<std::size_t>(i)], hbasis[static_cast<std::size_t>(j)]);
    a = 0.5 * (a + a.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a);
    Eigen::VectorXcd c = eig.eigenvectors().col(0);
    if (std::abs(c(0)) > 0.0) c *= std::conj(c(0)) / std::abs(c(0));

    ComplexField2D nx(x.grid());
    ComplexField2D nhx(x.grid());
    ComplexField2D np(x.grid());
    ComplexField2D nhp(x.grid());
    for (Eigen::Index i = 0; i < dim; ++i) {
      const auto k = static_cast<std::size_t>(i);
      axpy(nx, c(i), basis[k]);
      axpy(nhx, c(i), hbasis[k]);
      if (i > 0) {
        axpy(np, c(i), basis[k]);
        axpy(nhp, c(i), hbasis[k]);
      }
    }
    const double nrm = norm_of(nx);
    scale(nx, 1.0 / nrm);
    scale(nhx, 1.0 / nrm);
    x = std::move(nx);
    hx = std::move(nhx);
    if (dim > 1) {
      p = std::move(np);
      hp = std::move(nhp);
    }
  }
  return best;
}

double quadrupole_weight(double x1, double x2, GuideCenter c) {
  const double d1 = x1 - c.x1;
  const double d2 = x2 - c.x2;
  return d1 * d1 - d2 * d2;
}

GuideCenter density_centroid(const std::vector<const ComplexField2D*>& fields) {
  const auto x = fields.front()->grid().coordinates();
  const int n = fields.front()->n();
  double w = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  for (const auto* f : fields) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double p = std::norm((*f)(i, j));
        w += p;
        c1 += p * x[static_cast<std::size_t>(i)];
        c2 += p * x[static_cast<std::size_t>(j)];
      }
    }
  }
  return {c1 / w, c2 / w};
}

// Rotate each cluster of degenerate modes to eigenvectors of a symmetry-adapted
// operator: the x1 <-> x2 swap for swap-symmetric potentials, otherwise the
// quadrupole (x1 - c1)^2 - (x2 - c2)^2 about the cluster centroid, which picks
// the basis of definite reflection parity about the guide axes.
void rotate_cluster(std::vector<GuidedMode>& modes, std::size_t start, std::size_t end,
                    const ScalarField2D& v, const KineticOperator& kin, bool use_swap) {
  const std::size_t size = end - start;
  std::vector<ComplexField2D> ops;
  if (use_swap) {
    for (std::size_t k = start; k < end; ++k) ops.push_back(swapped(modes[k].field));
  } else {
    std::vector<const ComplexField2D*> fs;
    for (std::size_t k = start; k < end; ++k) fs.push_back(&modes[k].field);
    const GuideCenter c = density_centroid(fs);
    for (std::size_t k = start; k < end; ++k) {
      ComplexField2D q = modes[k].field;
      const auto x = q.grid().coordinates();
      for (int i = 0; i < q.n(); ++i)
        for (int j = 0; j < q.n(); ++j)
          q(i, j) *= quadrupole_weight(x[static_cast<std::size_t>(i)],
                                       x[static_cast<std::size_t>(j)], c);
      ops.push_back(std::move(q));
    }
  }
  const auto dim = static_cast<Eigen::Index>(size);
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      m(i, j) = overlap(modes[start + static_cast<std::size_t>(i)].field,
                        ops[static_cast<std::size_t>(j)]);
  m = 0.5 * (m + m.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m);
  std::vector<GuidedMode> rotated;
  // Descending eigenvalue: swap-even (or x1-oriented) first.
  for (Eigen::Index col = dim - 1; col >= 0; --col) {
    GuidedMode g = modes[start];
    g.field = ComplexField2D(v.grid());
    for (Eigen::Index i = 0; i < dim; ++i)
      axpy(g.field, eig.eigenvectors()(i, col), modes[start + static_cast<std::size_t>(i)].field);
    g.field = normalize(g.field);
    fix_phase(g.field);
    const ComplexField2D hg = hamiltonian(kin, g.field, v);
    g.mu = overlap(g.field, hg).real();
    ComplexField2D r = hg;
    axpy(r, -g.mu, g.field);
    g.residual = norm_of(r);
    rotated.push_back(std::move(g));
  }
  for (std::size_t k = 0; k < size; ++k) modes[start + k] = std::move(rotated[k]);
}

// Rotate each cluster of degenerate modes to eigenvectors of a symmetry-adapted
// operator: the x1 <-> x2 swap for swap-symmetric potentials, otherwise the
// quadrupole (x1 - c1)^2 - (x2 - c2)^2 about the cluster centroid, which picks
// the basis of definite reflection parity about the guide axes.
void adapt_degenerate(std::vector<GuidedMode>& modes, const ScalarField2D& v,
                      const KineticOperator& kin, double threshold) {
  const bool swap_symmetric = symmetry_deviation(v) == 0.0;
  std::size_t start = 0;
  while (start < modes.size()) {
    std::size_t end = start + 1;
    while (end < modes.size() && std::abs(modes[end].mu - modes[start].mu) < threshold) ++end;
    if (end - start > 1) rotate_cluster(modes, start, end, v, kin, swap_symmetric);
    start = end;
  }
}

void label_mode(GuidedMode& m) {
  m.swap_parity = overlap(m.field, swapped(m.field)).real();
  const GuideCenter c = density_centroid({&m.field});
  const auto x = m.field.grid().coordinates();
  double s1 = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < m.field.n(); ++i) {
    for (int j = 0; j < m.field.n(); ++j) {
      const double p = std::norm(m.field(i, j));
      const double d1 = x[static_cast<std::size_t>(i)] - c.x1;
      const double d2 = x[static_cast<std::size_t>(j)] - c.x2;
      s1 += p * d1 * d1;
      s2 += p * d2 * d2;
    }
  }
  if (s1 > 1.2 * s2)
    m.orientation = "x1";
  else if (s2 > 1.2 * s1)
    m.orientation = "x2";
  else
    m.orientation = "iso";
}

}  // namespace

ComplexField2D apply_hamiltonian(const ComplexField2D& f, const ScalarField2D& potential,
                                 const PhysicsConstants& constants) {
  require_same_grid(f.grid(), potential.grid(), "apply_hamiltonian");
  const KineticOperator kin(f.grid(), constants);
  return hamiltonian(kin, f, potential);
}

ModeSet solve_modes(const ScalarField2D& potential, int count, const PhysicsConstants& constants,
                    const ModeSolverConfig& cfg, ModeSolveReport* report) {
  if (count < 1) throw ConfigError("mode count must be >= 1");
  if (!(cfg.dtau_um > 0.0)) throw ConfigError("imaginary time step must be positive");
  if (!(cfg.tol > 0.0)) throw ConfigError("mode tolerance must be positive");
  if (cfg.max_iters < 200) throw ConfigError("max_iters must cover the 200-step convergence check");

  const Grid2D& grid = potential.grid();
  const KineticOperator kin(grid, constants);
  const Stepper imag = make_imaginary_stepper(grid, potential, constants, cfg.dtau_um);

  const auto [vmin_it, vmax_it] =
      std::minmax_element(potential.values().begin(), potential.values().end());
  const double vmin = *vmin_it;
  const double vmax = *vmax_it;
  const double vscale = std::max({std::abs(vmin), std::abs(vmax), 1e-12});
  const double boundary = boundary_average(potential);
  const GuideCenter center = cfg.center.value_or(well_centroid(potential, boundary));
  const double shift = std::max(vmax - vmin, 1e-6);
  const double roundoff_floor = 1e-14 * (kin.max_eigenvalue() + vscale);
  const double target = std::max(1e-2 * cfg.tol * vscale, roundoff_floor);
  const double accept = 10.0 * cfg.tol * vscale;
  const double lambda_bar = constants.lambda_bar();

  if (report) report->mu_history.assign(static_cast<std::size_t>(count), {});

  // Block imaginary-time iteration: the span of the lowest `count` modes
  // converges at the rate set by the gap to the next mode, so near-degenerate
  // pairs inside the block cause no stagnation. Gram-Schmidt in seed order
  // after each step; the per-vector estimate is the log norm decay.
  std::vector<ComplexField2D> block;
  for (int k = 0; k < count; ++k) {
    ComplexField2D psi = seed_field(grid, center, cfg.seed_sigma_um, k);
    project_out(psi, block);
    block.push_back(normalize(psi));
  }

  const auto dim = static_cast<Eigen::Index>(count);
  auto ritz = [&]() {
    std::vector<ComplexField2D> hb;
    for (const auto& f : block) hb.push_back(hamiltonian(kin, f, potential));
    Eigen::MatrixXcd a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j)
        a(i, j) = overlap(block[static_cast<std::size_t>(i)], hb[static_cast<std::size_t>(j)]);
    a = 0.5 * (a + a.adjoint()).eval();
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(a);
  };

  std::optional<Eigen::VectorXd> previous;
  bool converged = false;
  long long it = 0;
  std::vector<double> mu_est(static_cast<std::size_t>(count), 0.0);
  while (it < cfg.max_iters) {
    ++it;
    for (std::size_t k = 0; k < block.size(); ++k) {
      imag.step(block[k]);
      for (std::size_t l = 0; l < k; ++l) axpy(block[k], -overlap(block[l], block[k]), block[l]);
      const double after = norm_of(block[k]);
      if (!(after > 0.0) || !std::isfinite(after))
        throw NumericalError("imaginary-time iteration collapsed for mode " + std::to_string(k + 1));
      mu_est[k] = -(lambda_bar / cfg.dtau_um) * std::log(after);
      scale(block[k], 1.0 / after);
      if (report) report->mu_history[k].push_back(mu_est[k]);
    }
    if (it % 100 == 0) {
      const Eigen::VectorXd values = ritz().eigenvalues();
      if (previous) {
        converged = true;
        for (Eigen::Index k = 0; k < dim; ++k)
          if (!(std::abs(values(k) - (*previous)(k)) <
                cfg.tol * std::max(std::abs(values(k)), vscale)))
            converged = false;
      }
      previous = values;
      if (converged) break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "imaginary-time iteration did not converge within " << cfg.max_iters
        << " steps (last estimates";
    for (double m : mu_est) msg << ' ' << m;
    msg << ')';
    throw ConvergenceError(msg.str());
  }

  const auto eig = ritz();
  std::vector<GuidedMode> modes;
  for (Eigen::Index col = 0; col < dim; ++col) {
    ComplexField2D x(grid);
    for (Eigen::Index i = 0; i < dim; ++i)
      axpy(x, eig.eigenvectors()(i, col), block[static_cast<std::size_t>(i)]);
    const auto k = col + 1;
    RefineResult refined = refine(std::move(x), kin, potential, modes, shift, target, 400);
    if (!(refined.residual <= accept)) {
      std::ostringstream msg;
      msg << "mode " << k << " residual " << refined.residual << " exceeds " << accept;
      throw ConvergenceError(msg.str());
    }
    if (cfg.require_guided && !(refined.mu < boundary - 1e-6)) {
      std::ostringstream msg;
      msg << "mode " << k << " is not guided: mu = " << refined.mu
          << " is not below the boundary level " << boundary;
      throw NotGuidedError(msg.str());
    }
    GuidedMode mode{std::move(refined.field), refined.mu, 0.0, refined.residual, it, 0.0, {}};
    fix_phase(mode.field);
    modes.push_back(std::move(mode));
  }

  std::stable_sort(modes.begin(), modes.end(),
                   [](const GuidedMode& a, const GuidedMode& b) { return a.mu < b.mu; });
  adapt_degenerate(modes, potential, kin, 10.0 * cfg.tol * vscale);
  for (auto& m : modes) {
    m.beta_offset = -m.mu / lambda_bar;
    label_mode(m);
  }
  return ModeSet{std::move(modes), potential};
}

void rotate_to_axis_parity(ModeSet& set, std::size_t first, std::size_t last,
                           const PhysicsConstants& constants) {
  if (first >= last || last > set.size()) throw ConfigError("invalid mode range");
  if (last - first < 2) return;
  const KineticOperator kin(set.potential.grid(), constants);
  rotate_cluster(set.modes, first, last, set.potential, kin, false);
  for (std::size_t k = first; k < last; ++k) {
    set.modes[k].beta_offset = -set.modes[k].mu / constants.lambda_bar();
    label_mode(set.modes[k]);
  }
}

ModeSolverConfig guide_solver_config(const StructureSpec& spec, GuideId guide,
                                     ModeSolverConfig base) {
  base.center = guide_center(guide, guide_offset(spec));
  base.seed_sigma_um = guide_half_width(spec) / std::sqrt(2.0);
  return base;
}

ComplexField2D launch_field(const StructureSpec& spec, const Grid2D& grid,
                            const PhysicsConstants& constants, const ModeSolverConfig& cfg) {
  const ScalarField2D v = build_isolated_guide_potential(grid, spec, GuideId::I);
  const ModeSet set = solve_modes(v, 1, constants, guide_solver_config(spec, GuideId::I, cfg));
  ComplexField2D psi = set[0].field;
  const ComplexField2D t = swapped(psi);
  axpy(psi, 1.0, t);
  return normalize(psi);
}

}  // namespace pairtunnel
