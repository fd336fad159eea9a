#pragma once

#include <vector>

#include <Eigen/SparseCore>

#include "darkdimer/model.hpp"
#include "darkdimer/observables.hpp"
#include "darkdimer/opalg.hpp"

namespace darkdimer {

/// Which unravelling of the master equation to integrate.
///   kGeneral:  -i[H, rho] + sum_s gamma/2 [(N+1) L_{J_s} + N L_{J_s^dag}
///              + |M|/2 L_{J_{phi,s}} - |M|/2 L_{J_{phi+pi,s}}]
///   kSqueezed: -i[H, rho] + 4 gamma |mu nu| (L_{J_x} + L_{J_y})
enum class GeneratorForm { kGeneral, kSqueezed };

/// L_xi rho = xi rho xi^dag - 1/2 {xi^dag xi, rho}.
ComplexMatrix dissipator(const ComplexMatrix& xi, const ComplexMatrix& rho);

/// Reference right-hand sides, written term by term. Inputs need not be
/// Hermitian or positive. Throw ArgumentError on a dimension mismatch.
ComplexMatrix lindblad_rhs_general(const ComplexMatrix& rho, const ModelOperators& model);
/// Throws PreconditionError when the model has no squeezed jumps
/// (non-minimal bath or N = 0).
ComplexMatrix lindblad_rhs_squeezed(const ComplexMatrix& rho, const ModelOperators& model);

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ModelOperators& model,
                           GeneratorForm form);

/// Precompiled generator for repeated application along a trajectory.
///
/// The dissipator channels of the chosen form are folded into at most
/// dim(span) channels by diagonalizing their coefficient matrix, and the
/// anticommutator terms go into an effective Hamiltonian, so one application
/// is -i Heff rho + h.c. + sum_k r_k J_k rho J_k^dag. `apply` assumes a
/// Hermitian input. From six atoms on the operators are stored sparse, since
/// the jumps are sums of single-site terms; below that dense products win.
class Generator {
 public:
  Generator(const ModelOperators& model, GeneratorForm form);

  void apply(const ComplexMatrix& rho, ComplexMatrix& out) const;
  ComplexMatrix apply(const ComplexMatrix& rho) const;

  std::size_t channel_count() const {
    return sparse_ ? sparse_ops_.jumps.size() : dense_.jumps.size();
  }
  Eigen::Index dim() const { return dim_; }

 private:
  template <class Op>
  struct Channel {
    double rate;
    Op op;
  };
  template <class Op>
  struct Compiled {
    Op minus_i_heff;
    std::vector<Channel<Op>> jumps;
  };
  template <class Op>
  static void apply_with(const Compiled<Op>& c, const ComplexMatrix& rho, ComplexMatrix& out);

  Eigen::Index dim_ = 0;
  bool sparse_ = false;
  Compiled<ComplexMatrix> dense_;
  Compiled<Eigen::SparseMatrix<Complex>> sparse_ops_;
};

struct EvolveConfig {
  double dt = 0.005;
  double t_max = 2.0e4;
  int record_stride = 200;
  double convergence_tol = 1e-9;
  GeneratorForm form = GeneratorForm::kGeneral;

  /// Throws ArgumentError naming the offending field. dt must be in (0, 0.1).
  void validate() const;
};

struct SeriesRecord {
  double t = 0.0;
  double purity = 0.0;
  PolarizationMoments moments;
  std::vector<double> populations;
};

struct TimeSeries {
  std::vector<SeriesRecord> records;

  std::vector<double> times() const;
};

/// Worst invariant defects seen along a trajectory. Trace and Hermiticity
/// are measured after each raw RK4 step, before re-Hermitizing and
/// renormalizing; the eigenvalue bound is sampled at recorded steps.
struct HygieneReport {
  double max_trace_drift = 0.0;
  double max_hermiticity_defect = 0.0;
  double min_eigenvalue = 1.0;
  std::size_t samples = 0;
};

struct EvolveResult {
  TimeSeries series;
  DensityMatrix final_state;
  HygieneReport hygiene;
  double t_final = 0.0;
};

/// Fixed-step RK4 from t = 0 to t_max, recording every `record_stride` steps
/// plus the final step. Throws IntegrationError if the smallest eigenvalue of
/// a recorded state drops below -1e-6.
EvolveResult evolve(const DensityMatrix& rho0, const ModelOperators& model,
                    const EvolveConfig& cfg);

struct SteadyStateResult {
  DensityMatrix state;
  bool converged = false;
  /// ||d rho / dt||_F at the returned state.
  double residual = 0.0;
  /// First time the residual fell below the tolerance (t_max if never).
  double t_converge = 0.0;
  TimeSeries series;
  HygieneReport hygiene;
};

/// Integrates like `evolve` but stops as soon as ||d rho/dt||_F <= tol.
/// Non-convergence is reported through `converged`, not thrown.
SteadyStateResult steady_state(const DensityMatrix& rho0, const ModelOperators& model,
                               const EvolveConfig& cfg);

/// Dense Liouvillian acting on column-stacked rho. Limited to n_at <= 5.
ComplexMatrix liouvillian_matrix(const ModelOperators& model, GeneratorForm form);

struct NullSpace {
  int dimension = 0;
  ComplexMatrix right;  // columns span {x : L x = 0}
  ComplexMatrix left;   // columns span {y : y^dag L = 0}
  RealVector singular_values;  // ascending
};

NullSpace liouvillian_null_space(const ModelOperators& model, GeneratorForm form,
                                 double tolerance = 1e-10);

/// Steady state reached from rho0, computed from the null space by
/// projecting rho0 onto it along the conserved (left null) directions.
DensityMatrix projected_steady_state(const DensityMatrix& rho0, const ModelOperators& model,
                                     GeneratorForm form, double tolerance = 1e-10);

ComplexVector vectorize(const ComplexMatrix& m);
ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index dim);

}  // namespace darkdimer
