#include "pulseqfi/kmsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pulseqfi/common.hpp"

namespace pulseqfi::kmsim {

namespace {

using SpMat = Eigen::SparseMatrix<complexd>;
using Trip = Eigen::Triplet<complexd>;

struct Ops {
  int na = 2, nx = 0, nv = 0, dim = 0;
  SpMat K1, K2;      // ax^+ sm - sp ax, av^+ sm - sp av
  SpMat sm, av;      // lowering operators
  SpMat smd, avd;    // adjoints
  SpMat S3;          // sm^+ av + av^+ sm
  Eigen::VectorXd ne_diag, nx_diag, nv_diag;  // number-operator diagonals
  Eigen::VectorXd see_diag, svv_diag;         // sm^+ sm, av^+ av diagonals
  std::vector<int> top_pulse, top_aux;        // indices at the highest level of each mode

  int idx(int a, int x, int v) const { return (a * nx + x) * nv + v; }
};

Ops build_ops(int nx, int nv) {
  Ops o;
  o.nx = nx;
  o.nv = nv;
  o.dim = 2 * nx * nv;
  std::vector<Trip> t_sm, t_ax, t_av;
  o.ne_diag.setZero(o.dim);
  o.nx_diag.setZero(o.dim);
  o.nv_diag.setZero(o.dim);
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < nx; ++x)
      for (int v = 0; v < nv; ++v) {
        const int i = o.idx(a, x, v);
        o.ne_diag(i) = a;
        o.nx_diag(i) = x;
        o.nv_diag(i) = v;
        if (a == 1) t_sm.emplace_back(o.idx(0, x, v), i, 1.0);
        if (x > 0) t_ax.emplace_back(o.idx(a, x - 1, v), i, std::sqrt(double(x)));
        if (v > 0) t_av.emplace_back(o.idx(a, x, v - 1), i, std::sqrt(double(v)));
        if (x == nx - 1) o.top_pulse.push_back(i);
        if (v == nv - 1) o.top_aux.push_back(i);
      }
  o.sm = SpMat(o.dim, o.dim);
  o.sm.setFromTriplets(t_sm.begin(), t_sm.end());
  SpMat ax(o.dim, o.dim);
  ax.setFromTriplets(t_ax.begin(), t_ax.end());
  o.av = SpMat(o.dim, o.dim);
  o.av.setFromTriplets(t_av.begin(), t_av.end());
  o.smd = SpMat(o.sm.adjoint());
  o.avd = SpMat(o.av.adjoint());
  SpMat axd = SpMat(ax.adjoint());
  o.K1 = axd * o.sm - o.smd * ax;
  o.K2 = o.avd * o.sm - o.smd * o.av;
  o.S3 = o.smd * o.av + o.avd * o.sm;
  o.see_diag = o.ne_diag;  // sm^+ sm = |e><e|
  o.svv_diag = o.nv_diag;  // av^+ av
  o.K1.makeCompressed();
  o.K2.makeCompressed();
  o.sm.makeCompressed();
  o.av.makeCompressed();
  o.smd.makeCompressed();
  o.avd.makeCompressed();
  o.S3.makeCompressed();
  return o;
}

double diag_expectation(const Eigen::MatrixXcd& rho, const Eigen::VectorXd& w) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) s += w(i) * rho(i, i).real();
  return s;
}

struct Coeffs {
  double c1, c2, m;  // sqrt(G) xi, sqrt(G) f1 / 2, -f2
};

Coeffs coeffs_at(const pulses::PulseShape& shape, double gamma, double clamp_eps, double t) {
  const double xi = shape.kind() == pulses::ShapeKind::Sampled &&
                            (t < shape.support_lo() || t > shape.support_hi())
                        ? 0.0
                        : shape.amplitude_right(t);
  const double I = shape.cumulative_sq(t);
  Coeffs c;
  c.c1 = std::sqrt(gamma) * xi;
  if (std::min(I, 1.0 - I) < clamp_eps) {
    // the auxiliary mode decouples when the pulse mode is empty or exhausted
    c.c2 = 0.0;
    c.m = 0.0;
  } else {
    const double root = std::sqrt((1.0 - I) * I);
    c.c2 = 0.5 * std::sqrt(gamma) * (1.0 - 2.0 * I) * xi / root;
    c.m = -xi / root;
  }
  return c;
}

class Liouvillian {
 public:
  Liouvillian(const Ops& ops, const pulses::PulseShape& shape, double gamma, double gamma_perp,
              double clamp_eps)
      : ops_(ops),
        shape_(shape),
        gamma_(gamma),
        gamma_perp_(gamma_perp),
        clamp_eps_(clamp_eps),
        w_(ops.dim, ops.dim),
        x_(ops.dim, ops.dim) {}

  // All products write into preallocated workspace; nothing allocates per call.
  void apply(double t, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) {
    const Coeffs c = coeffs_at(shape_, gamma_, clamp_eps_, t);
    const double sg = std::sqrt(gamma_);
    const double g_eff = gamma_ + gamma_perp_;  // both dissipators share sm rho sm^+

    // Hamiltonian commutator: K1, K2 are anti-Hermitian with real coefficients,
    // so with Y = c1 K1 rho + c2 K2 rho we get -i[H, rho] = Y + Y^+.
    w_.noalias() = ops_.K1 * rho;
    w_ *= c.c1;
    if (c.c2 != 0.0) {
      x_.noalias() = ops_.K2 * rho;
      w_.noalias() += c.c2 * x_;
    }
    out = w_;
    out += w_.adjoint();

    // jump terms: (G+Gperp) sm rho sm^+ + m^2 av rho av^+ + sqrt(G) m (av rho sm^+ + h.c.)
    if (g_eff != 0.0) {
      w_.noalias() = ops_.sm * rho;
      x_.noalias() = w_ * ops_.smd;
      out += g_eff * x_;
    }
    if (c.m != 0.0) {
      w_.noalias() = ops_.av * rho;
      x_.noalias() = w_ * ops_.avd;
      out += (c.m * c.m) * x_;
      x_.noalias() = w_ * ops_.smd;
      x_ *= sg * c.m;
      out += x_;
      out += x_.adjoint();
      // anticommutator part from S3 = sm^+ av + av^+ sm (Hermitian)
      x_.noalias() = ops_.S3 * rho;
      x_ *= 0.5 * sg * c.m;
      out -= x_;
      out -= x_.adjoint();
    }

    // diagonal anticommutator with (G+Gperp) sm^+ sm + m^2 av^+ av
    diag_ = g_eff * ops_.see_diag + (c.m * c.m) * ops_.svv_diag;
    x_ = rho;
    x_.array().colwise() *= diag_.array();
    out -= 0.5 * x_;
    out -= 0.5 * x_.adjoint();
  }

 private:
  const Ops& ops_;
  const pulses::PulseShape& shape_;
  double gamma_, gamma_perp_, clamp_eps_;
  Eigen::MatrixXcd w_, x_;
  Eigen::VectorXd diag_;
};

KMTrajectory run_once(const jcshort::FockCoefficients& initial, const pulses::PulseShape& shape,
                      double gamma, double gamma_perp, double t_end, const KMOptions& opts,
                      int nx, int nv) {
  const Ops ops = build_ops(nx, nv);
  const int dim = ops.dim;

  // |g> (x) |psi> (x) |0>
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  const Eigen::VectorXcd& c = initial.coeffs();
  for (int n = 0; n < c.size() && n < nx; ++n) v(ops.idx(0, n, 0)) = c(n);
  Eigen::MatrixXcd rho = v * v.adjoint();

  const double t0 = opts.t_start.value_or(shape.support_lo());
  if (!(t_end > t0)) throw std::invalid_argument("km_evolve: t_end must exceed the start time");
  const double dt_req = opts.dt_over_T * shape.duration();
  const std::size_t steps = static_cast<std::size_t>(std::ceil((t_end - t0) / dt_req));
  const double dt = (t_end - t0) / static_cast<double>(steps);
  const std::size_t stride =
      std::max<std::size_t>(1, steps / std::max(1, opts.sample_target));

  Liouvillian liouville(ops, shape, gamma, gamma_perp, opts.clamp_eps);
  Eigen::MatrixXcd k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), tmp(dim, dim);

  KMTrajectory traj;
  std::vector<bool> stored_done(opts.store_states_at.size(), false);
  traj.stored.resize(opts.store_states_at.size());

  auto record = [&](double t) {
    KMSample s;
    s.t = t;
    s.p_e = diag_expectation(rho, ops.ne_diag);
    s.n_pulse = diag_expectation(rho, ops.nx_diag);
    s.n_aux = diag_expectation(rho, ops.nv_diag);
    s.trace = rho.trace().real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    s.min_eig = es.eigenvalues().minCoeff();
    traj.samples.push_back(s);
    traj.max_aux_occupation = std::max(traj.max_aux_occupation, s.n_aux);
    traj.max_positivity_violation = std::max(traj.max_positivity_violation, -s.min_eig);

    double tp = 0.0, ta = 0.0;
    for (int i : ops.top_pulse) tp += rho(i, i).real();
    for (int i : ops.top_aux) ta += rho(i, i).real();
    traj.max_tail_pulse = std::max(traj.max_tail_pulse, tp);
    traj.max_tail_aux = std::max(traj.max_tail_aux, ta);
  };

  record(t0);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = t0 + dt * static_cast<double>(k);
    liouville.apply(t, rho, k1);
    tmp = rho + (0.5 * dt) * k1;
    liouville.apply(t + 0.5 * dt, tmp, k2);
    tmp = rho + (0.5 * dt) * k2;
    liouville.apply(t + 0.5 * dt, tmp, k3);
    tmp = rho + dt * k3;
    liouville.apply(t + dt, tmp, k4);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double t_next = t0 + dt * static_cast<double>(k + 1);
    for (std::size_t i = 0; i < opts.store_states_at.size(); ++i) {
      if (!stored_done[i] && t_next + 1e-12 >= opts.store_states_at[i]) {
        traj.stored[i] = TripartiteState{rho, t_next, nx, nv};
        stored_done[i] = true;
      }
    }
    if ((k + 1) % stride == 0 || k + 1 == steps) record(t_next);
  }

  traj.final_state = TripartiteState{std::move(rho), t_end, nx, nv};
  if (traj.max_tail_pulse > opts.tail_tol || traj.max_tail_aux > opts.tail_tol)
    throw truncation_error("km_evolve: cutoff tail population above tolerance");
  if (traj.max_positivity_violation > opts.positivity_tol)
    throw truncation_error("km_evolve: positivity drift above tolerance");
  return traj;
}

}  // namespace

KMTrajectory km_evolve(const jcshort::FockCoefficients& initial, const pulses::PulseShape& shape,
                       double gamma, double gamma_perp, double t_end, KMOptions opts) {
  if (gamma < 0.0 || gamma_perp < 0.0)
    throw std::invalid_argument("km_evolve: negative coupling rate");
  int nx = opts.pulse_dim > 0 ? opts.pulse_dim : initial.cutoff() + 3;
  int nv = opts.aux_dim;
  nx = std::max(nx, static_cast<int>(initial.coeffs().size()));
  try {
    return run_once(initial, shape, gamma, gamma_perp, t_end, opts, nx, nv);
  } catch (const truncation_error&) {
    // one automatic retry with enlarged cutoffs
    return run_once(initial, shape, gamma, gamma_perp, t_end, opts, nx + 2, nv + 3);
  }
}

Eigen::MatrixXcd reduced_pulse_state(const TripartiteState& st) {
  const int nx = st.dim_pulse, nv = st.dim_aux;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(nx, nx);
  for (int m = 0; m < nx; ++m)
    for (int n = 0; n < nx; ++n) {
      complexd s = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int vv = 0; vv < nv; ++vv)
          s += st.rho((a * nx + m) * nv + vv, (a * nx + n) * nv + vv);
      out(m, n) = s;
    }
  return out;
}

double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  Eigen::MatrixXcd d = rho - sigma;
  d = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

std::vector<double> auxiliary_occupation(const KMTrajectory& traj) {
  std::vector<double> out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) out.push_back(s.n_aux);
  return out;
}

double step_halving_deviation(const jcshort::FockCoefficients& initial,
                              const pulses::PulseShape& shape, double gamma, double gamma_perp,
                              double t_end, KMOptions opts) {
  const KMTrajectory a = km_evolve(initial, shape, gamma, gamma_perp, t_end, opts);
  KMOptions fine = opts;
  fine.dt_over_T = 0.5 * opts.dt_over_T;
  const KMTrajectory b = km_evolve(initial, shape, gamma, gamma_perp, t_end, fine);
  return trace_distance(reduced_pulse_state(a.final_state), reduced_pulse_state(b.final_state));
}

Eigen::MatrixXcd jc_reduced_state(const jcshort::FockCoefficients& state, double gamma,
                                  double G_t, int dim) {
  const jcshort::JCBranches br = jcshort::jc_evolve(state, gamma, G_t);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(dim);
  for (int n = 0; n < br.excited.size() && n < dim; ++n) {
    e(n) = br.excited(n);
    g(n) = br.ground(n);
  }
  return e * e.adjoint() + g * g.adjoint();
}

}  // namespace pulseqfi::kmsim
