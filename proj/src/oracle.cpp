#include "sik/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace sik {

namespace {

using Complex = std::complex<double>;

constexpr double kGolden = 0.6180339887498949;

Matrix perturbation(int n, double eps) {
  // e^{-eps J} = cos(eps) I - sin(eps) J since J^2 = -I
  return std::cos(eps) * Matrix::Identity(2 * n, 2 * n) - std::sin(eps) * standard_J(n);
}

// Rows longer than one are scaled to unit length. The kernel is unchanged,
// and a large hyperbolic part no longer sets the scale for the rest.
CMatrix shrink_rows(CMatrix m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double len = m.row(i).norm();
    if (len > 1.0) m.row(i) /= len;
  }
  return m;
}

// Singular values of gamma^m - omega after row shrinking, with the kernel
// threshold that goes with them.
std::pair<Eigen::VectorXd, double> endpoint_singular_values(const Matrix& power, Complex omega) {
  CMatrix shifted = power.cast<Complex>();
  shifted.diagonal().array() -= omega;
  shifted = shrink_rows(std::move(shifted));
  return {Eigen::JacobiSVD<CMatrix>(shifted).singularValues(), 1e-11 * std::max(1.0, shifted.norm())};
}

// Smallest singular value of gamma^m - omega, m <= m_max, outside the kernel.
double endpoint_margin(const PathSpec& path, int m_max, Complex omega) {
  const Matrix monodromy = evolve(path, path.duration());
  Matrix power = Matrix::Identity(2 * path.n, 2 * path.n);
  double margin = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= m_max; ++m) {
    power = monodromy * power;
    const auto [sv, tol] = endpoint_singular_values(power, omega);
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv[i] > tol) margin = std::min(margin, sv[i]);
    }
  }
  return margin;
}

struct Sample {
  int piece;
  double s;
  double g;
};

struct Piece {
  int iterate;
  int segment;
  double t0;
  Matrix start;  // gamma at the piece start
};

class Sweep {
 public:
  Sweep(const PathSpec& path, int m_max, Complex omega, const OracleConfig& cfg)
      : path_(path), n_(path.n), m_max_(m_max), omega_(omega), cfg_(cfg),
        real_omega_(std::abs(omega.imag()) < 1e-15),
        e_(perturbation(path.n, cfg.epsilon)), j_(standard_J(path.n)) {
    const int dim = 2 * n_;
    Matrix gamma = Matrix::Identity(dim, dim);
    double t = 0.0;
    for (const auto& seg : path_.segments) {
      a_.push_back(j_ * seg.S);
      seg_start_.push_back(gamma);
      seg_t0_.push_back(t);
      gamma = Matrix((seg.dt * a_.back()).exp()) * gamma;
      t += seg.dt;
    }
    monodromy_ = gamma;
    period_ = t;
    Matrix power = Matrix::Identity(dim, dim);
    for (int j = 0; j < m_max_; ++j) {
      for (std::size_t k = 0; k < path_.segments.size(); ++k) {
        pieces_.push_back({j, static_cast<int>(k), j * period_ + seg_t0_[k], seg_start_[k] * power});
      }
      power = monodromy_ * power;
    }
    omega_pow_ = std::pow(omega_, -n_);
  }

  double time_of(int piece, double s) const { return pieces_[piece].t0 + s; }

  Matrix delta(int piece, double s) const {
    const Piece& p = pieces_[piece];
    return e_ * Matrix((s * a_[p.segment]).exp()) * p.start;
  }

  double g_of(const Matrix& d) const {
    if (real_omega_) {
      Matrix shifted = d;
      shifted.diagonal().array() -= omega_.real();
      return shifted.determinant() * omega_pow_.real();
    }
    CMatrix shifted = d.cast<Complex>();
    shifted.diagonal().array() -= omega_;
    return (omega_pow_ * shifted.determinant()).real();
  }

  Eigen::VectorXd singular_values(const Matrix& d) const {
    if (real_omega_) {
      Matrix shifted = d;
      shifted.diagonal().array() -= omega_.real();
      return Eigen::JacobiSVD<Matrix>(shifted).singularValues();
    }
    CMatrix shifted = d.cast<Complex>();
    shifted.diagonal().array() -= omega_;
    return Eigen::JacobiSVD<CMatrix>(shifted).singularValues();
  }

  // j-th smallest singular value of delta - omega
  double sigma_min(int piece, double s, int j = 0) const {
    const auto sv = singular_values(delta(piece, s));
    return sv[sv.size() - 1 - j];
  }

  std::vector<Sample> samples() const {
    std::vector<Sample> out;
    for (std::size_t seg = 0; seg < path_.segments.size(); ++seg) {
      const double dt = path_.segments[seg].dt;
      std::vector<double> s_values;
      const int grid = std::max(cfg_.grid, 2);
      for (int i = 0; i <= grid; ++i) s_values.push_back(dt * i / grid);
      const double floor_s = std::min(dt / grid, cfg_.end_floor * cfg_.epsilon);
      for (double h = dt / grid; h > floor_s; h *= std::exp2(-1.0 / cfg_.octave_points)) {
        s_values.push_back(h);
        s_values.push_back(dt - h);
      }
      s_values.push_back(floor_s);
      s_values.push_back(dt - floor_s);
      std::sort(s_values.begin(), s_values.end());
      s_values.erase(std::unique(s_values.begin(), s_values.end()), s_values.end());

      // uniform points by repeated stepping, the rest directly
      std::vector<Matrix> ys;
      ys.reserve(s_values.size());
      const Matrix step = (dt / grid * a_[seg]).exp();
      Matrix uniform = Matrix::Identity(2 * n_, 2 * n_);
      int next_uniform = 0;
      for (double s : s_values) {
        if (next_uniform <= grid && s == dt * next_uniform / grid) {
          ys.push_back(e_ * uniform);
          uniform = step * uniform;
          ++next_uniform;
        } else {
          ys.push_back(e_ * Matrix((s * a_[seg]).exp()));
        }
      }
      for (std::size_t p = seg; p < pieces_.size(); p += path_.segments.size()) {
        const bool first_piece = p == 0;
        for (std::size_t i = 0; i < s_values.size(); ++i) {
          if (i == 0 && !first_piece) continue;  // equals the previous piece end
          out.push_back({static_cast<int>(p), s_values[i], g_of(ys[i] * pieces_[p].start)});
        }
      }
    }
    std::sort(out.begin(), out.end(), [this](const Sample& x, const Sample& y) {
      if (x.piece != y.piece) return x.piece < y.piece;
      return x.s < y.s;
    });
    return out;
  }

  // Interval between consecutive samples expressed in the piece of b.
  std::pair<double, double> local_interval(const Sample& a, const Sample& b) const {
    return {a.piece == b.piece ? a.s : 0.0, b.s};
  }

  double bisect(int piece, double lo, double hi, double g_lo) const {
    for (int it = 0; it < 200 && hi - lo > 0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double gm = g_of(delta(piece, mid));
      if (gm == 0.0) return mid;
      if ((gm > 0) == (g_lo > 0)) {
        lo = mid;
        g_lo = gm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  double golden(int piece, double lo, double hi, int j) const {
    return golden_on(lo, hi, [&](double s) { return sigma_min(piece, s, j); });
  }

  double golden_abs_g(int piece, double lo, double hi) const {
    return golden_on(lo, hi, [&](double s) { return std::abs(g_of(delta(piece, s))); });
  }

  template <class F>
  double golden_on(double lo, double hi, F&& f) const {
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-17 * std::max(1.0, std::abs(hi)); ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kGolden * (hi - lo);
        if (x1 == x2) break;
        f1 = f(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kGolden * (hi - lo);
        if (x1 == x2) break;
        f2 = f(x2);
      }
    }
    return f1 < f2 ? x1 : x2;
  }

  // Kernel dimension and crossing-form signature at a located root; nullopt if
  // the point is not on the singular set.
  std::optional<Crossing> examine(int piece, double s) const {
    const Matrix d = delta(piece, s);
    const Eigen::Index dim = d.rows();
    CMatrix shifted = d.cast<Complex>();
    shifted.diagonal().array() -= omega_;
    shifted = shrink_rows(std::move(shifted));
    const double scale = std::max(1.0, shifted.norm());
    Eigen::JacobiSVD<CMatrix> svd(shifted, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int k = 0;
    while (k < dim && sv[dim - 1 - k] <= cfg_.kernel_tol * scale) ++k;
    if (k == 0) return std::nullopt;
    if (k < dim && sv[dim - 1 - k] <= cfg_.gap_tol * scale) {
      throw CertificationError("crossing at t = " + std::to_string(time_of(piece, s)) +
                               " has no clear kernel gap");
    }
    const CMatrix kernel = svd.matrixV().rightCols(k);
    const Piece& p = pieces_[piece];
    // e^{-eps J} gamma(t) is generated by J S_eff, S_eff = E S E^T
    const Matrix& s_mat = path_.segments[p.segment].S;
    const Matrix s_eff = e_ * s_mat * e_.transpose();
    const CMatrix form = kernel.adjoint() * s_eff.cast<Complex>() * kernel;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (form + form.adjoint()));
    const double form_scale = std::max(1.0, s_mat.norm());
    int signature = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const double ev = es.eigenvalues()[i];
      if (std::abs(ev) <= cfg_.form_tol * form_scale) {
        throw CertificationError("degenerate crossing form at t = " +
                                 std::to_string(time_of(piece, s)));
      }
      signature += ev > 0 ? 1 : -1;
    }
    return Crossing{time_of(piece, s), signature, k};
  }

  // Near a local minimum of |g| there is either a tangential root or a pair of
  // simple roots too close for the grid. A tangential root of one block can
  // hide behind a singular value another block keeps near zero, so each
  // singular value is minimized in turn, and g is probed on a geometric ladder
  // around every minimizer to split close pairs.
  template <class Add>
  void resolve_minimum(int piece, double lo, double hi, double s_mid, Add&& add, int depth = 0) const {
    // Singular values are Lipschitz with constant |A| |delta|; those that
    // cannot reach zero inside the bracket are skipped.
    const Matrix d_mid = delta(piece, s_mid);
    const auto sv = singular_values(d_mid);
    const double reach = 2.0 * a_[pieces_[piece].segment].norm() * d_mid.norm() *
                         std::max(hi - s_mid, s_mid - lo);
    const double eta = exclusion(lo, hi, s_mid);
    std::vector<double> found;
    auto keep = [&](double s) {
      const auto c = examine(piece, s);
      if (c) found.push_back(s);
      add(c);
    };
    auto consider = [&](double s_star) {
      // in a sub-bracket a minimizer on the edge is the crossing already found
      if (depth > 0 && (s_star - lo < eta || hi - s_star < eta)) return;
      std::vector<double> probes{lo, s_star, hi};
      for (double h = hi - lo; h > 1e-15 * std::max(1.0, std::abs(s_star)); h *= 0.5) {
        if (s_star - h > lo) probes.push_back(s_star - h);
        if (s_star + h < hi) probes.push_back(s_star + h);
      }
      std::sort(probes.begin(), probes.end());
      probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
      bool split = false;
      double g_prev = g_of(delta(piece, probes[0]));
      for (std::size_t k = 1; k < probes.size(); ++k) {
        const double g_next = g_of(delta(piece, probes[k]));
        if (g_prev != 0.0 && g_next != 0.0 && (g_prev > 0) != (g_next > 0)) {
          keep(bisect(piece, probes[k - 1], probes[k], g_prev));
          split = true;
        }
        g_prev = g_next;
      }
      if (!split) keep(s_star);
    };
    // |g| is the product of every singular value, so a tangential root stays
    // visible even when other blocks hold singular values below its neighbours
    if (sv[sv.size() - 1] <= reach) consider(golden_abs_g(piece, lo, hi));
    for (int j = 0; j < 2 * n_; ++j) {
      if (sv[sv.size() - 1 - j] > reach) break;
      consider(golden(piece, lo, hi, j));
    }
    // a singular value with two zeros in the bracket shows only one of them
    // to the golden search; look again on either side of what was found
    if (found.empty() || depth >= 4) return;
    std::sort(found.begin(), found.end());
    std::vector<std::pair<double, double>> gaps{{lo, found.front() - eta}, {found.back() + eta, hi}};
    for (std::size_t k = 1; k < found.size(); ++k) gaps.emplace_back(found[k - 1] + eta, found[k] - eta);
    for (const auto& [a, b] : gaps) rescan(piece, a, b, add, depth + 1);
  }

  // Width kept clear around a located root when the rest of a bracket is
  // searched again.
  static double exclusion(double lo, double hi, double s) {
    return std::max(1e-6 * (hi - lo), 1e-15 * std::max(1.0, std::abs(s)));
  }

  // Resamples [lo, hi] uniformly and on a geometric ladder towards both ends.
  // A crossing found just beyond an end pulls |g| down towards it, so only
  // interior minima are resolved; the ladder keeps close neighbours interior.
  template <class Add>
  void rescan(int piece, double lo, double hi, Add&& add, int depth) const {
    constexpr int kUniform = 32;
    const double floor = exclusion(lo, hi, hi);
    if (!(hi - lo > 4 * floor)) return;
    std::vector<double> s;
    for (int i = 0; i <= kUniform; ++i) s.push_back(i == kUniform ? hi : lo + (hi - lo) * i / kUniform);
    // four rungs per halving: near a found root |g| grows like a power of the
    // distance, and a coarser ladder can step over the dip of a neighbour
    for (double h = (hi - lo) / (2 * kUniform); h > floor; h *= 0.8408964152537145) {
      s.push_back(lo + h);
      s.push_back(hi - h);
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    const int last = static_cast<int>(s.size()) - 1;
    std::vector<double> g(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) g[i] = g_of(delta(piece, s[i]));
    auto flips = [&](int i) { return g[i] != 0.0 && g[i + 1] != 0.0 && (g[i] > 0) != (g[i + 1] > 0); };
    for (int i = 0; i < last; ++i) {
      if (flips(i)) {
        const double root = bisect(piece, s[i], s[i + 1], g[i]);
        add(examine(piece, root));
        if (depth < 4) {
          const double eta = exclusion(s[i], s[i + 1], root);
          rescan(piece, s[std::max(i - 1, 0)], root - eta, add, depth + 1);
          rescan(piece, root + eta, s[std::min(i + 2, last)], add, depth + 1);
        }
      } else if (i > 0 && std::abs(g[i]) < std::abs(g[i - 1]) && std::abs(g[i]) <= std::abs(g[i + 1]) &&
                 !flips(i - 1)) {
        resolve_minimum(piece, s[i - 1], s[i + 1], s[i], add, depth);
      }
    }
  }

  std::vector<Crossing> crossings() const {
    const auto smp = samples();
    std::vector<Crossing> out;
    auto add = [&](const std::optional<Crossing>& c) {
      if (c) out.push_back(*c);
    };
    for (std::size_t i = 1; i < smp.size(); ++i) {
      const Sample& a = smp[i - 1];
      const Sample& b = smp[i];
      const auto [lo, hi] = local_interval(a, b);
      if (a.g != 0.0 && b.g != 0.0 && (a.g > 0) != (b.g > 0)) {
        const double root = bisect(b.piece, lo, hi, a.g);
        add(examine(b.piece, root));
        // a tangential root of another block can share the interval, or sit
        // just past a sample the search would otherwise treat as an edge
        const double eta = exclusion(lo, hi, root);
        const double before = i >= 2 && smp[i - 2].piece == b.piece && a.piece == b.piece ? smp[i - 2].s : lo;
        const double after = i + 1 < smp.size() && smp[i + 1].piece == b.piece ? smp[i + 1].s : hi;
        rescan(b.piece, before, root - eta, add, 1);
        rescan(b.piece, root + eta, after, add, 1);
        continue;
      }
      if (i + 1 >= smp.size()) continue;
      const Sample& c = smp[i + 1];
      const bool local_min = std::abs(b.g) < std::abs(a.g) && std::abs(b.g) <= std::abs(c.g);
      const bool sign_change_next = c.g != 0.0 && b.g != 0.0 && (b.g > 0) != (c.g > 0);
      if (!local_min || sign_change_next) continue;
      if (c.piece == b.piece && a.piece == b.piece) {
        // two tangential roots in neighbouring intervals show as one grid
        // minimum, so the surroundings are resampled finely
        const double lo2 = i >= 2 && smp[i - 2].piece == b.piece ? smp[i - 2].s : a.s;
        const double hi2 = i + 2 < smp.size() && smp[i + 2].piece == b.piece ? smp[i + 2].s : c.s;
        rescan(b.piece, lo2, hi2, add, 0);
      } else if (c.piece == b.piece) {
        resolve_minimum(b.piece, 0.0, c.s, b.s, add);
      } else {
        // bracket [a, c] straddles a piece boundary; search each side
        resolve_minimum(b.piece, a.piece == b.piece ? a.s : 0.0, b.s, b.s, add);
        resolve_minimum(c.piece, 0.0, c.s, c.s, add);
      }
    }
    std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) { return x.t < y.t; });
    std::vector<Crossing> merged;
    for (const auto& c : out) {
      // crossings near t = 0 sit a fraction of eps apart
      if (!merged.empty() && c.t - merged.back().t <= std::max(1e-10 * c.t, 1e-4 * cfg_.epsilon)) {
        if (c.contribution != merged.back().contribution || c.kernel_dim != merged.back().kernel_dim) {
          throw CertificationError("inconsistent crossing data near t = " + std::to_string(c.t));
        }
        continue;
      }
      merged.push_back(c);
    }
    return merged;
  }

  int endpoint_nullity(int m) const {
    Matrix power = Matrix::Identity(2 * n_, 2 * n_);
    for (int i = 0; i < m; ++i) power = monodromy_ * power;
    const auto [sv, tol] = endpoint_singular_values(power, omega_);
    int k = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv[i] <= tol) ++k;
    }
    return k;
  }

  double period() const { return period_; }

 private:
  const PathSpec& path_;
  int n_;
  int m_max_;
  Complex omega_;
  OracleConfig cfg_;
  bool real_omega_;
  Matrix e_;
  Matrix j_;
  std::vector<Matrix> a_;
  std::vector<Matrix> seg_start_;
  std::vector<double> seg_t0_;
  std::vector<Piece> pieces_;
  Matrix monodromy_;
  double period_ = 0.0;
  Complex omega_pow_;

};

bool is_one(Complex omega) { return std::abs(omega - Complex(1, 0)) < 1e-14; }

void check_omega(Complex omega) {
  if (std::abs(std::abs(omega) - 1.0) > 1e-12) throw InputError("omega must lie on the unit circle");
}

}  // namespace

double PathSpec::duration() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.dt;
  return t;
}

void PathSpec::validate() const {
  if (n < 1) throw InputError("path: n must be positive");
  if (segments.empty()) throw InputError("path: no segments");
  for (const auto& seg : segments) {
    if (seg.S.rows() != 2 * n || seg.S.cols() != 2 * n) throw InputError("path: generator has wrong size");
    if ((seg.S - seg.S.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw InputError("path: generator is not symmetric");
    }
    if (!(seg.dt > 0) || !std::isfinite(seg.dt)) throw InputError("path: durations must be positive");
  }
}

Matrix evolve(const PathSpec& path, double t) {
  path.validate();
  if (t < 0) throw InputError("evolve: negative time");
  const double period = path.duration();
  const Matrix j = standard_J(path.n);
  const int dim = 2 * path.n;
  auto partial = [&](double u) {
    Matrix g = Matrix::Identity(dim, dim);
    for (const auto& seg : path.segments) {
      const double h = std::min(u, seg.dt);
      if (h <= 0) break;
      g = Matrix((h * (j * seg.S)).exp()) * g;
      u -= h;
    }
    return g;
  };
  long reps = static_cast<long>(std::floor(t / period));
  double rest = t - reps * period;
  if (reps > 0 && rest <= 0) {
    --reps;
    rest = period;
  }
  const Matrix m = partial(period);
  Matrix power = Matrix::Identity(dim, dim);
  for (long i = 0; i < reps; ++i) power = m * power;
  return partial(rest) * power;
}

IterateSweep iterate_sweep(const PathSpec& path, int m_max, Complex omega, const OracleConfig& cfg) {
  path.validate();
  check_omega(omega);
  if (m_max < 1) throw InputError("iterate count must be positive");
  // The perturbation moves an eigenvalue by about sqrt(eps) inside a Jordan
  // block, so eps is kept below the distance of every endpoint from the
  // degenerate set, measured by its smallest nonzero singular value.
  OracleConfig tuned = cfg;
  tuned.epsilon = std::min(cfg.epsilon, std::max(cfg.epsilon_floor, 0.1 * endpoint_margin(path, m_max, omega)));
  // near t = 0 every singular value is of order eps
  tuned.kernel_tol = std::min(cfg.kernel_tol, 1e-4 * tuned.epsilon);
  tuned.gap_tol = std::min(cfg.gap_tol, 1e-3 * tuned.epsilon);
  const Sweep sweep(path, m_max, omega, tuned);
  IterateSweep out;
  out.crossings = sweep.crossings();
  const double period = sweep.period();
  const int shift = is_one(omega) ? path.n : 0;
  for (int m = 1; m <= m_max; ++m) {
    const double end = m * period;
    int total = 0;
    for (const auto& c : out.crossings) {
      if (std::abs(c.t - end) <= 1e-12 * std::max(1.0, end)) {
        throw CertificationError("perturbed crossing coincides with the end of iterate " + std::to_string(m));
      }
      if (c.t <= end) total += c.contribution;
    }
    out.index.push_back(total - shift);
    out.nullity.push_back(sweep.endpoint_nullity(m));
  }
  return out;
}

CrossingReport omega_report(const PathSpec& path, int m, Complex omega, const OracleConfig& cfg) {
  const IterateSweep sw = iterate_sweep(path, m, omega, cfg);
  CrossingReport rep;
  rep.omega = omega;
  rep.crossings = sw.crossings;
  rep.index = sw.index.back();
  rep.nullity = sw.nullity.back();
  rep.endpoint_degenerate = rep.nullity > 0;
  return rep;
}

int omega_index(const PathSpec& path, int m, Complex omega, const OracleConfig& cfg) {
  return iterate_sweep(path, m, omega, cfg).index.back();
}

std::vector<double> default_eps_sequence() {
  std::vector<double> out;
  for (int j = 0; j <= 20; ++j) out.push_back(std::ldexp(1e-2, -j));
  return out;
}

SplittingResult numeric_splitting(const PathSpec& path, Complex omega, const std::vector<double>& eps_sequence,
                                  const OracleConfig& cfg) {
  check_omega(omega);
  const int base = omega_index(path, 1, omega, cfg);
  SplittingResult out;
  int streak = 0;
  for (std::size_t j = 0; j < eps_sequence.size(); ++j) {
    const double e = eps_sequence[j];
    OracleConfig fine = cfg;
    fine.epsilon = std::min(cfg.epsilon, 1e-4 * e * e);
    const int up = omega_index(path, 1, omega * std::polar(1.0, e), fine) - base;
    const int down = omega_index(path, 1, omega * std::polar(1.0, -e), fine) - base;
    out.history.emplace_back(up, down);
    out.eps_used.push_back(e);
    streak = (j > 0 && out.history[j - 1] == out.history[j]) ? streak + 1 : 1;
    if (streak == 3) {
      out.s_plus = up;
      out.s_minus = down;
      out.stabilized_at = static_cast<int>(j);
      return out;
    }
  }
  throw NumericalError("splitting numbers did not stabilize over the eps sequence");
}

namespace {

Segment segment(Matrix s, double dt) { return Segment{std::move(s), dt}; }

Matrix rotation_generator(double angle) { return angle * Matrix::Identity(2, 2); }

Matrix shear_generator(double b) {
  Matrix s = Matrix::Zero(2, 2);
  s(1, 1) = -b;
  return s;
}

}  // namespace

PathSpec generator_path_for(const BasicBlock& block) {
  constexpr double pi = std::numbers::pi;
  PathSpec path;
  path.n = block.half_dim();
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, BlockN1>) {
          if (b.lambda == 1) {
            // I_2 is reached by a full turn; otherwise a shear
            path.segments.push_back(b.b == 0.0 ? segment(rotation_generator(2 * pi), 1.0)
                                               : segment(shear_generator(b.b), 1.0));
          } else if (b.b == 0.0) {
            path.segments.push_back(segment(rotation_generator(pi), 1.0));
          } else {
            // -I * N1(1, -b) = N1(-1, b)
            path.segments.push_back(segment(2.0 * shear_generator(-b.b), 0.5));
            path.segments.push_back(segment(rotation_generator(2 * pi), 0.5));
          }
        } else if constexpr (std::is_same_v<T, BlockD>) {
          const double a = std::log(std::abs(b.lambda));
          Matrix s(2, 2);
          s << 0, -a, -a, 0;
          if (b.lambda > 0) {
            path.segments.push_back(segment(s, 1.0));
          } else {
            path.segments.push_back(segment(2.0 * s, 0.5));
            path.segments.push_back(segment(rotation_generator(2 * pi), 0.5));
          }
        } else if constexpr (std::is_same_v<T, BlockR>) {
          path.segments.push_back(segment(rotation_generator(b.theta.radians()), 1.0));
        } else {
          // Reach diag(R, R) along unitary phases theta and 2pi - theta, which
          // do not move the later Jordan block rigidly, then shear inside the
          // root space.
          const double theta = b.theta.radians();
          const Matrix j1 = standard_J(1);
          Matrix s1(4, 4);
          s1.topLeftCorner(2, 2) = pi * Matrix::Identity(2, 2);
          s1.bottomRightCorner(2, 2) = pi * Matrix::Identity(2, 2);
          s1.topRightCorner(2, 2) = -(pi - theta) * j1;
          s1.bottomLeftCorner(2, 2) = (pi - theta) * j1;
          const Matrix r = rotation(theta);
          Matrix rot = Matrix::Zero(4, 4);
          rot.topLeftCorner(2, 2) = r;
          rot.bottomRightCorner(2, 2) = r;
          const Matrix c = r.transpose() * Matrix(b.B);
          Matrix nil = Matrix::Zero(4, 4);
          nil.topRightCorner(2, 2) = 0.5 * (c + c.transpose());
          const Matrix a2 = rot * nil * rot.transpose();
          Matrix s2 = -standard_J(2) * a2;
          s2 = 0.5 * (s2 + s2.transpose()).eval();
          path.segments.push_back(segment(2.0 * s1, 0.5));
          path.segments.push_back(segment(2.0 * s2, 0.5));
        }
      },
      block.variant());
  return path;
}

PathSpec diamond_paths(const PathSpec& a, const PathSpec& b) {
  a.validate();
  b.validate();
  const double ta = a.duration();
  const double tb = b.duration();
  if (std::abs(ta - tb) > 1e-12 * std::max(1.0, ta)) throw InputError("diamond_paths: durations differ");
  PathSpec out;
  out.n = a.n + b.n;
  std::size_t ia = 0, ib = 0;
  double ra = a.segments[0].dt, rb = b.segments[0].dt;
  while (ia < a.segments.size() && ib < b.segments.size()) {
    const double h = std::min(ra, rb);
    out.segments.push_back({diamond(a.segments[ia].S, b.segments[ib].S), h});
    ra -= h;
    rb -= h;
    if (ra <= 1e-15) {
      if (++ia < a.segments.size()) ra = a.segments[ia].dt;
    }
    if (rb <= 1e-15) {
      if (++ib < b.segments.size()) rb = b.segments[ib].dt;
    }
  }
  return out;
}

PathSpec diamond_paths(const std::vector<PathSpec>& parts) {
  if (parts.empty()) throw InputError("diamond_paths of an empty list");
  PathSpec out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = diamond_paths(out, parts[i]);
  return out;
}

}  // namespace sik
