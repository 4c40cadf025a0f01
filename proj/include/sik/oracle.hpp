#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "sik/symplectic.hpp"

namespace sik {

/// Piecewise-constant generator: gamma' = J S gamma on a segment of length dt.
struct Segment {
  Matrix S;
  double dt = 0.0;
};

/// Symplectic path gamma(t) with gamma(0) = I, extended past its duration T by
/// gamma(t) = gamma(t - jT) gamma(T)^j.
struct PathSpec {
  int n = 0;
  std::vector<Segment> segments;

  double duration() const;
  /// Throws InputError on asymmetric generators, bad sizes or durations.
  void validate() const;
};

/// gamma(t) for any t >= 0, iterates formed by the extension rule.
Matrix evolve(const PathSpec& path, double t);

struct OracleConfig {
  double epsilon = 1e-6;       ///< rotation perturbation e^{-eps J}
  double epsilon_floor = 1e-9; ///< epsilon shrinks towards this near degenerate endpoints
  int grid = 4096;             ///< uniform samples per segment
  int octave_points = 32;      ///< geometric samples per octave near segment ends
  double end_floor = 1e-3;     ///< geometric grid reaches end_floor * epsilon
  double kernel_tol = 1e-12;   ///< singular values below this (relative) span the kernel
  double gap_tol = 1e-10;      ///< next singular value must exceed this (relative)
  double form_tol = 1e-10;     ///< crossing-form eigenvalues must exceed this
};

struct Crossing {
  double t = 0.0;
  int contribution = 0;  ///< signature of the crossing form
  int kernel_dim = 0;
};

struct CrossingReport {
  std::complex<double> omega;
  std::vector<Crossing> crossings;
  bool endpoint_degenerate = false;
  int nullity = 0;
  int index = 0;
};

/// omega-index of the m-th iterate by regularized crossing counting.
/// Throws CertificationError when a crossing cannot be resolved.
CrossingReport omega_report(const PathSpec& path, int m, std::complex<double> omega,
                            const OracleConfig& cfg = {});
int omega_index(const PathSpec& path, int m, std::complex<double> omega,
                const OracleConfig& cfg = {});

struct IterateSweep {
  std::vector<int> index;    ///< index[m-1] = i_omega(gamma, m)
  std::vector<int> nullity;  ///< nullity[m-1] = nu_omega(gamma, m)
  std::vector<Crossing> crossings;
};

/// All iterates m = 1..m_max from a single pass over gamma^{m_max}.
IterateSweep iterate_sweep(const PathSpec& path, int m_max, std::complex<double> omega,
                           const OracleConfig& cfg = {});

/// eps_j = 2^{-j} * 1e-2, j = 0..20.
std::vector<double> default_eps_sequence();

struct SplittingResult {
  int s_plus = 0;
  int s_minus = 0;
  int stabilized_at = -1;  ///< index into the eps sequence of the third agreement
  std::vector<std::pair<int, int>> history;
  std::vector<double> eps_used;
};

/// S^{+-} = i_{omega e^{+-i eps}} - i_omega, stabilized over the eps sequence
/// (three consecutive agreements). Throws NumericalError without stabilization.
SplittingResult numeric_splitting(const PathSpec& path, std::complex<double> omega,
                                  const std::vector<double>& eps_sequence = default_eps_sequence(),
                                  const OracleConfig& cfg = {});

/// Explicit generator path of duration 1 whose time-1 map is the block.
PathSpec generator_path_for(const BasicBlock& block);

/// Interleaved sum of two paths of equal duration, breakpoints merged.
PathSpec diamond_paths(const PathSpec& a, const PathSpec& b);
PathSpec diamond_paths(const std::vector<PathSpec>& parts);

}  // namespace sik
