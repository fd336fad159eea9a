#include "darkdimer/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "darkdimer/errors.hpp"

namespace darkdimer {
namespace {

constexpr double kPositivityAbort = -1e-6;
constexpr int kMaxLiouvillianAtoms = 5;
// Sparse products beat dense ones from six atoms (dim 64) on.
constexpr Eigen::Index kSparseDim = 64;

Eigen::SparseMatrix<Complex> to_sparse(const ComplexMatrix& m) {
  const double cut = 1e-15 * std::max(1.0, m.cwiseAbs().maxCoeff());
  return m.sparseView(1.0, cut);
}

void require_square_match(const ComplexMatrix& rho, const ModelOperators& model, const char* where) {
  if (rho.rows() != rho.cols() || rho.rows() != model.hamiltonian.rows()) {
    throw ArgumentError(std::string(where) + ": state dimension does not match the model");
  }
}

std::vector<DissipatorChannel> channels_for(const ModelOperators& model, GeneratorForm form) {
  if (form == GeneratorForm::kGeneral) return model.travelling;
  if (!model.squeezed) {
    throw PreconditionError(
        "squeezed generator requires a minimal-uncertainty bath with n_ph > 0");
  }
  return {(*model.squeezed)[0], (*model.squeezed)[1]};
}

Complex frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.conjugate().array() * b.array()).sum();
}

}  // namespace

ComplexMatrix dissipator(const ComplexMatrix& xi, const ComplexMatrix& rho) {
  const ComplexMatrix xdx = xi.adjoint() * xi;
  return xi * rho * xi.adjoint() - 0.5 * (xdx * rho + rho * xdx);
}

ComplexMatrix lindblad_rhs_general(const ComplexMatrix& rho, const ModelOperators& model) {
  return lindblad_rhs(rho, model, GeneratorForm::kGeneral);
}

ComplexMatrix lindblad_rhs_squeezed(const ComplexMatrix& rho, const ModelOperators& model) {
  return lindblad_rhs(rho, model, GeneratorForm::kSqueezed);
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ModelOperators& model,
                           GeneratorForm form) {
  require_square_match(rho, model, "lindblad_rhs");
  const ComplexMatrix& h = model.hamiltonian;
  ComplexMatrix out = -kI * (h * rho - rho * h);
  for (const DissipatorChannel& ch : channels_for(model, form)) {
    if (ch.rate == 0.0) continue;
    out += ch.rate * dissipator(ch.op, rho);
  }
  return out;
}

Generator::Generator(const ModelOperators& model, GeneratorForm form) {
  const std::vector<DissipatorChannel> channels = channels_for(model, form);

  // Orthonormal basis of span{op_k} under the Frobenius inner product.
  std::vector<ComplexMatrix> basis;
  for (const DissipatorChannel& ch : channels) {
    if (ch.rate == 0.0) continue;
    ComplexMatrix v = ch.op;
    for (const ComplexMatrix& b : basis) v -= frobenius_inner(b, v) * b;
    const double norm = v.norm();
    if (norm > 1e-12 * std::max(1.0, ch.op.norm())) basis.push_back(v / norm);
  }

  // Coefficient (Kossakowski) matrix of the dissipator in that basis.
  const auto nb = static_cast<Eigen::Index>(basis.size());
  ComplexMatrix kmat = ComplexMatrix::Zero(nb, nb);
  for (const DissipatorChannel& ch : channels) {
    if (ch.rate == 0.0) continue;
    ComplexVector c(nb);
    for (Eigen::Index a = 0; a < nb; ++a) c(a) = frobenius_inner(basis[a], ch.op);
    kmat += ch.rate * c * c.adjoint();
  }

  ComplexMatrix heff = model.hamiltonian;
  dim_ = heff.rows();
  sparse_ = dim_ >= kSparseDim;
  if (nb > 0) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (kmat + kmat.adjoint()));
    const RealVector& lambda = solver.eigenvalues();
    const double scale = lambda.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < nb; ++i) {
      if (std::abs(lambda(i)) <= 1e-14 * scale) continue;
      ComplexMatrix op = ComplexMatrix::Zero(dim_, dim_);
      for (Eigen::Index a = 0; a < nb; ++a) op += solver.eigenvectors()(a, i) * basis[a];
      heff -= (0.5 * kI * lambda(i)) * (op.adjoint() * op);
      if (sparse_) {
        sparse_ops_.jumps.push_back({lambda(i), to_sparse(op)});
      } else {
        dense_.jumps.push_back({lambda(i), std::move(op)});
      }
    }
  }
  if (sparse_) {
    sparse_ops_.minus_i_heff = to_sparse(-kI * heff);
  } else {
    dense_.minus_i_heff = -kI * heff;
  }
}

template <class Op>
void Generator::apply_with(const Compiled<Op>& c, const ComplexMatrix& rho, ComplexMatrix& out) {
  ComplexMatrix a(rho.rows(), rho.cols());
  ComplexMatrix b(rho.rows(), rho.cols());
  a.noalias() = c.minus_i_heff * rho;
  out = a + a.adjoint();
  for (const Channel<Op>& ch : c.jumps) {
    a.noalias() = ch.op * rho;
    // J (J rho)^dag = J rho J^dag for Hermitian rho.
    b = a.adjoint();
    out.noalias() += ch.rate * (ch.op * b);
  }
}

void Generator::apply(const ComplexMatrix& rho, ComplexMatrix& out) const {
  if (sparse_) {
    apply_with(sparse_ops_, rho, out);
  } else {
    apply_with(dense_, rho, out);
  }
}

ComplexMatrix Generator::apply(const ComplexMatrix& rho) const {
  ComplexMatrix out;
  apply(rho, out);
  return out;
}

void EvolveConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& what) {
    throw ArgumentError(field + ": " + what);
  };
  if (!(dt > 0.0) || !(dt < 0.1)) fail("dt", "must lie in (0, 0.1)");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) fail("t_max", "must be finite and > 0");
  if (record_stride < 1) fail("record_stride", "must be >= 1");
  if (!(convergence_tol > 0.0)) fail("convergence_tol", "must be > 0");
}

std::vector<double> TimeSeries::times() const {
  std::vector<double> t;
  t.reserve(records.size());
  for (const SeriesRecord& r : records) t.push_back(r.t);
  return t;
}

namespace {

struct IntegrationOutcome {
  ComplexMatrix rho;
  TimeSeries series;
  HygieneReport hygiene;
  double t_final = 0.0;
  bool converged = false;
  double residual = 0.0;
  double t_converge = 0.0;
};

IntegrationOutcome integrate(const DensityMatrix& rho0, const ModelOperators& model,
                             const EvolveConfig& cfg, bool stop_on_convergence) {
  cfg.validate();
  if (rho0.dim() != static_cast<std::size_t>(model.hamiltonian.rows())) {
    throw ArgumentError("evolve: initial state dimension does not match the model");
  }
  const Generator gen(model, cfg.form);
  const CollectiveSpin spin(model.geometry.n_at);
  const double h = cfg.dt;
  const auto steps = static_cast<long long>(std::llround(cfg.t_max / cfg.dt));

  IntegrationOutcome out;
  out.rho = rho0.matrix();
  const Eigen::Index d = out.rho.rows();
  ComplexMatrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), stage(d, d);

  auto record = [&](double t) {
    const double min_eig = hermitian_eigenvalues(out.rho)(0);
    out.hygiene.min_eigenvalue = std::min(out.hygiene.min_eigenvalue, min_eig);
    ++out.hygiene.samples;
    if (min_eig < kPositivityAbort) {
      std::ostringstream msg;
      msg << "evolve: smallest eigenvalue " << min_eig << " at t = " << t
          << "; integration unstable, reduce dt";
      throw IntegrationError(msg.str());
    }
    out.series.records.push_back(
        {t, purity(out.rho), spin.moments(out.rho), excitation_populations(out.rho)});
  };

  record(0.0);
  long long step = 0;
  for (; step < steps; ++step) {
    const double t = static_cast<double>(step) * h;
    gen.apply(out.rho, k1);
    out.residual = k1.norm();
    if (!out.converged && out.residual <= cfg.convergence_tol) {
      out.converged = true;
      out.t_converge = t;
      if (stop_on_convergence) break;
    }
    stage = out.rho + (0.5 * h) * k1;
    gen.apply(stage, k2);
    stage = out.rho + (0.5 * h) * k2;
    gen.apply(stage, k3);
    stage = out.rho + h * k3;
    gen.apply(stage, k4);
    out.rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    out.hygiene.max_trace_drift =
        std::max(out.hygiene.max_trace_drift, std::abs(out.rho.trace() - 1.0));
    out.hygiene.max_hermiticity_defect =
        std::max(out.hygiene.max_hermiticity_defect, hermiticity_defect(out.rho));
    stage = 0.5 * (out.rho + out.rho.adjoint());
    out.rho = stage / stage.trace().real();

    if ((step + 1) % cfg.record_stride == 0 && step + 1 < steps) {
      record(static_cast<double>(step + 1) * h);
    }
  }
  out.t_final = static_cast<double>(step) * h;
  if (!out.converged) {
    gen.apply(out.rho, k1);
    out.residual = k1.norm();
    out.t_converge = out.t_final;
    if (out.residual <= cfg.convergence_tol) out.converged = true;
  }
  if (out.series.records.back().t != out.t_final) record(out.t_final);
  return out;
}

}  // namespace

EvolveResult evolve(const DensityMatrix& rho0, const ModelOperators& model,
                    const EvolveConfig& cfg) {
  IntegrationOutcome o = integrate(rho0, model, cfg, false);
  return EvolveResult{std::move(o.series), DensityMatrix(std::move(o.rho)), o.hygiene, o.t_final};
}

SteadyStateResult steady_state(const DensityMatrix& rho0, const ModelOperators& model,
                               const EvolveConfig& cfg) {
  IntegrationOutcome o = integrate(rho0, model, cfg, true);
  return SteadyStateResult{DensityMatrix(std::move(o.rho)), o.converged, o.residual,
                           o.t_converge, std::move(o.series), o.hygiene};
}

ComplexVector vectorize(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index dim) {
  if (v.size() != dim * dim) throw ArgumentError("unvectorize: size mismatch");
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

ComplexMatrix liouvillian_matrix(const ModelOperators& model, GeneratorForm form) {
  if (model.geometry.n_at > kMaxLiouvillianAtoms) {
    throw ResourceError("liouvillian_matrix: dense Liouvillian limited to n_at <= 5");
  }
  const auto d = static_cast<std::size_t>(model.hamiltonian.rows());
  const ComplexMatrix id = identity(d);
  const ComplexMatrix& h = model.hamiltonian;
  // vec(A rho B) = (B^T kron A) vec(rho) for column stacking.
  ComplexMatrix l = -kI * (kron(id, h) - kron(h.transpose(), id));
  for (const DissipatorChannel& ch : channels_for(model, form)) {
    if (ch.rate == 0.0) continue;
    const ComplexMatrix xdx = ch.op.adjoint() * ch.op;
    l += ch.rate * (kron(ch.op.conjugate(), ch.op) - 0.5 * kron(id, xdx) -
                    0.5 * kron(xdx.transpose(), id));
  }
  return l;
}

NullSpace liouvillian_null_space(const ModelOperators& model, GeneratorForm form,
                                 double tolerance) {
  const ComplexMatrix l = liouvillian_matrix(model, form);
  Eigen::BDCSVD<ComplexMatrix> svd(l, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();  // descending
  const Eigen::Index n = s.size();
  NullSpace ns;
  ns.singular_values = s.reverse();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (s(i) <= tolerance) ++ns.dimension;
  }
  ns.right = svd.matrixV().rightCols(ns.dimension);
  ns.left = svd.matrixU().rightCols(ns.dimension);
  return ns;
}

DensityMatrix projected_steady_state(const DensityMatrix& rho0, const ModelOperators& model,
                                     GeneratorForm form, double tolerance) {
  if (rho0.dim() != static_cast<std::size_t>(model.hamiltonian.rows())) {
    throw ArgumentError("projected_steady_state: dimension mismatch");
  }
  const NullSpace ns = liouvillian_null_space(model, form, tolerance);
  if (ns.dimension == 0) {
    throw PreconditionError("projected_steady_state: Liouvillian has no null space");
  }
  const ComplexMatrix overlap = ns.left.adjoint() * ns.right;
  const ComplexVector coeff = overlap.fullPivLu().solve(ns.left.adjoint() * vectorize(rho0.matrix()));
  ComplexMatrix rho = unvectorize(ns.right * coeff, model.hamiltonian.rows());
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return DensityMatrix(std::move(rho));
}

}  // namespace darkdimer
