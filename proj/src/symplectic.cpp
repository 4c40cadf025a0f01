#include "sik/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace sik {

namespace {

constexpr double kClusterTol = 1e-5;

int half_dimension(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0) {
    throw InputError(std::string(what) + ": expected a square matrix of positive even size");
  }
  return static_cast<int>(m.rows() / 2);
}

struct Cluster {
  Complex value;
  int multiplicity;
};

std::vector<Cluster> cluster_eigenvalues(const Matrix& m) {
  Eigen::EigenSolver<Matrix> es(m, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue solver failed");
  const Eigen::VectorXcd ev = es.eigenvalues();
  const int k = static_cast<int>(ev.size());
  std::vector<int> parent(k);
  for (int i = 0; i < k; ++i) parent[i] = i;
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double scale = std::max(1.0, std::abs(ev[i]));
      if (std::abs(ev[i] - ev[j]) < kClusterTol * scale) parent[find(i)] = find(j);
    }
  }
  std::vector<Cluster> out;
  std::vector<int> index(k, -1);
  for (int i = 0; i < k; ++i) {
    const int root = find(i);
    if (index[root] < 0) {
      index[root] = static_cast<int>(out.size());
      out.push_back({Complex(0, 0), 0});
    }
    out[index[root]].value += ev[i];
    out[index[root]].multiplicity += 1;
  }
  for (auto& c : out) c.value /= static_cast<double>(c.multiplicity);
  std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return out;
}

// Orthonormal basis of the numerical kernel of a, taking the dim smallest
// right singular vectors.
template <class M>
M kernel_basis(const M& a, int dim) {
  Eigen::JacobiSVD<M> svd(a, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(dim);
}

int geometric_multiplicity(const CMatrix& a, double tol) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() > 0 ? s[0] : 0.0);
  int g = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] <= tol * scale) ++g;
  }
  return g;
}

// Vector of the generalized eigenspace ker(A^2) that is not in ker(A),
// where A = M - omega I has a single 2-dimensional root block at omega.
template <class M>
Eigen::Matrix<typename M::Scalar, Eigen::Dynamic, 1> jordan_top(const M& a) {
  const M k2 = kernel_basis<M>(a * a, 2);
  const M image = a * k2;
  Eigen::JacobiSVD<M> svd(image, Eigen::ComputeFullV);
  return k2 * svd.matrixV().col(0);
}

CMatrix shifted(const Matrix& m, Complex omega) {
  CMatrix a = m.cast<Complex>();
  a.diagonal().array() -= omega;
  return a;
}

}  // namespace

SymplecticMatrix::SymplecticMatrix(Matrix m, double tol) : n_(half_dimension(m, "symplectic matrix")), m_(std::move(m)) {
  const double defect = sik::symplectic_defect(m_);
  if (!(defect <= tol)) {
    throw InputError("matrix is not symplectic: max |M^T J M - J| = " + std::to_string(defect));
  }
  const double det = m_.determinant();
  if (!(std::abs(det - 1.0) <= 1e-8 * std::max(1.0, m_.cwiseAbs().maxCoeff()))) {
    throw InputError("symplectic matrix has det != 1: " + std::to_string(det));
  }
}

double SymplecticMatrix::symplectic_defect() const { return sik::symplectic_defect(m_); }

SymplecticMatrix SymplecticMatrix::operator*(const SymplecticMatrix& other) const {
  if (other.n_ != n_) throw InputError("dimension mismatch in symplectic product");
  return SymplecticMatrix(m_ * other.m_, 1e-8);
}

SymplecticMatrix SymplecticMatrix::inverse() const {
  const Matrix j = standard_J(n_);
  return SymplecticMatrix(-j * m_.transpose() * j, 1e-8);
}

SymplecticMatrix SymplecticMatrix::power(int m) const {
  if (m < 0) return inverse().power(-m);
  Matrix out = Matrix::Identity(2 * n_, 2 * n_);
  Matrix base = m_;
  for (int e = m; e > 0; e >>= 1) {
    if (e & 1) out = out * base;
    base = base * base;
  }
  return SymplecticMatrix(out, 1e-6);
}

Matrix standard_J(int n) {
  if (n < 1) throw InputError("standard_J: n must be positive");
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -Matrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
  return j;
}

double symplectic_defect(const Matrix& m) {
  const int n = half_dimension(m, "symplectic_defect");
  const Matrix j = standard_J(n);
  return (m.transpose() * j * m - j).cwiseAbs().maxCoeff();
}

Matrix diamond(const Matrix& a, const Matrix& b) {
  const int i = half_dimension(a, "diamond");
  const int k = half_dimension(b, "diamond");
  const int n = i + k;
  Matrix out = Matrix::Zero(2 * n, 2 * n);
  out.block(0, 0, i, i) = a.block(0, 0, i, i);
  out.block(0, n, i, i) = a.block(0, i, i, i);
  out.block(n, 0, i, i) = a.block(i, 0, i, i);
  out.block(n, n, i, i) = a.block(i, i, i, i);
  out.block(i, i, k, k) = b.block(0, 0, k, k);
  out.block(i, n + i, k, k) = b.block(0, k, k, k);
  out.block(n + i, i, k, k) = b.block(k, 0, k, k);
  out.block(n + i, n + i, k, k) = b.block(k, k, k, k);
  return out;
}

Matrix diamond(const std::vector<Matrix>& parts) {
  if (parts.empty()) throw InputError("diamond of an empty list");
  Matrix out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = diamond(out, parts[i]);
  return out;
}

Matrix rotation(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

BasicBlock BasicBlock::n1(int lambda, double b) {
  if (lambda != 1 && lambda != -1) throw InputError("N1 eigenvalue must be +1 or -1");
  if (!std::isfinite(b)) throw InputError("N1 parameter must be finite");
  return BasicBlock(BlockN1{lambda, b});
}

BasicBlock BasicBlock::d(double lambda) {
  if (!std::isfinite(lambda) || lambda == 0.0 || lambda == 1.0 || lambda == -1.0) {
    throw InputError("D block eigenvalue must be real and not in {0, 1, -1}");
  }
  return BasicBlock(BlockD{lambda});
}

namespace {

void check_block_angle(const Angle& theta) {
  const Real v = theta.value();
  if (v <= 0 || v >= 1) throw InputError("block angle must lie in (0, 1) turns");
  if (theta.is_rational() && theta.as_rational() == Rational(1, 2)) {
    throw InputError("block angle must differ from pi");
  }
  if (!theta.is_rational() && abs(v - Real(0.5)) <= theta.radius()) {
    throw InputError("block angle is indistinguishable from pi");
  }
}

}  // namespace

BasicBlock BasicBlock::r(const Angle& theta) {
  check_block_angle(theta);
  return BasicBlock(BlockR{theta});
}

BasicBlock BasicBlock::n2(const Angle& theta, const Eigen::Matrix2d& B) {
  check_block_angle(theta);
  const double t = theta.radians();
  const double b1 = B(0, 0), b2 = B(0, 1), b3 = B(1, 0), b4 = B(1, 1);
  const double constraint = (b2 - b3) * std::cos(t) + (b1 + b4) * std::sin(t);
  if (std::abs(constraint) > 1e-10 * std::max(1.0, B.cwiseAbs().maxCoeff())) {
    throw InputError("N2 block is not symplectic: need (b2-b3) cos(theta) + (b1+b4) sin(theta) = 0");
  }
  const double s = (b2 - b3) * std::sin(t);
  if (s == 0.0) throw InputError("N2 block requires (b2 - b3) sin(theta) != 0");
  return BasicBlock(BlockN2{theta, B, s > 0 ? Triviality::trivial : Triviality::nontrivial});
}

BasicBlock BasicBlock::n2(const Angle& theta, Triviality triviality, double scale) {
  check_block_angle(theta);
  if (!(scale > 0)) throw InputError("N2 scale must be positive");
  // B = R(theta) * c I makes R^T B symmetric; (b2 - b3) sin(theta) = -2c sin^2(theta).
  const double c = triviality == Triviality::trivial ? -scale : scale;
  const Eigen::Matrix2d B = c * Eigen::Matrix2d(rotation(theta.radians()));
  return BasicBlock(BlockN2{theta, B, triviality});
}

int BasicBlock::half_dim() const {
  return std::holds_alternative<BlockN2>(v_) ? 2 : 1;
}

Matrix materialize(const BasicBlock& block) {
  return std::visit(
      [](const auto& b) -> Matrix {
        using T = std::decay_t<decltype(b)>;
        Matrix m;
        if constexpr (std::is_same_v<T, BlockN1>) {
          m.resize(2, 2);
          m << b.lambda, b.b, 0, b.lambda;
        } else if constexpr (std::is_same_v<T, BlockD>) {
          m.resize(2, 2);
          m << b.lambda, 0, 0, 1.0 / b.lambda;
        } else if constexpr (std::is_same_v<T, BlockR>) {
          m = rotation(b.theta.radians());
        } else {
          m = Matrix::Zero(4, 4);
          const Matrix r = rotation(b.theta.radians());
          m.topLeftCorner(2, 2) = r;
          m.bottomRightCorner(2, 2) = r;
          m.topRightCorner(2, 2) = b.B;
        }
        return m;
      },
      block.variant());
}

Matrix materialize(const std::vector<BasicBlock>& blocks) {
  std::vector<Matrix> parts;
  parts.reserve(blocks.size());
  for (const auto& b : blocks) parts.push_back(materialize(b));
  return diamond(parts);
}

NormalFormDecomposition decomposition_of(const std::vector<BasicBlock>& blocks) {
  NormalFormDecomposition dec;
  for (const auto& block : blocks) {
    dec.n += block.half_dim();
    std::visit(
        [&](const auto& b) {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, BlockN1>) {
            const int sign = b.b > 0 ? 1 : (b.b < 0 ? -1 : 0);
            if (b.lambda == 1) {
              (sign > 0 ? dec.p_minus : sign < 0 ? dec.p_plus : dec.p_zero) += 1;
            } else {
              (sign > 0 ? dec.q_minus : sign < 0 ? dec.q_plus : dec.q_zero) += 1;
            }
          } else if constexpr (std::is_same_v<T, BlockD>) {
            dec.hyp_dim += 2;
          } else if constexpr (std::is_same_v<T, BlockR>) {
            dec.thetas.push_back(b.theta);
          } else {
            (b.triviality == Triviality::trivial ? dec.betas : dec.alphas).push_back(b.theta);
          }
        },
        block.variant());
  }
  return dec;
}

std::vector<FloquetMultiplier> floquet_spectrum(const Matrix& m, double tol) {
  half_dimension(m, "floquet_spectrum");
  std::vector<FloquetMultiplier> out;
  for (const auto& c : cluster_eigenvalues(m)) {
    out.push_back({c.value, c.multiplicity, std::abs(std::abs(c.value) - 1.0) <= tol});
  }
  return out;
}

const char* to_string(OrbitClass c) {
  switch (c) {
    case OrbitClass::elliptic: return "elliptic";
    case OrbitClass::hyperbolic: return "hyperbolic";
    case OrbitClass::irrationally_elliptic: return "irrationally_elliptic";
    case OrbitClass::mixed: return "mixed";
  }
  return "mixed";
}

Classification classify(const Matrix& m, double tol, const RationalityConfig& rcfg) {
  const auto spectrum = floquet_spectrum(m, tol);
  Classification out;
  out.circle_margin = std::numeric_limits<double>::infinity();
  int on_circle = 0;
  bool all_irrational = true;
  for (const auto& f : spectrum) {
    const double dev = std::abs(std::abs(f.value) - 1.0);
    if (f.on_unit_circle) {
      on_circle += f.multiplicity;
      out.circle_defect = std::max(out.circle_defect, dev);
    } else {
      out.circle_margin = std::min(out.circle_margin, dev);
    }
    if (std::abs(f.value - Complex(1, 0)) < kClusterTol) {
      out.multiplicity_of_one = f.multiplicity;
    } else if (f.on_unit_circle) {
      ensure_precision();
      const double turns_over_pi = std::abs(std::arg(f.value)) / std::numbers::pi;
      if (rationality_test(Real(turns_over_pi), rcfg).rational) all_irrational = false;
    }
  }
  if (out.multiplicity_of_one < 2) {
    throw PreconditionError("not a closed-characteristic monodromy: 1 is not a multiplier of multiplicity >= 2");
  }
  const int dim = static_cast<int>(m.rows());
  out.nondegenerate = out.multiplicity_of_one == 2;
  out.elliptic = on_circle == dim;
  if (out.elliptic && out.nondegenerate && all_irrational) {
    out.orbit_class = OrbitClass::irrationally_elliptic;
  } else if (out.elliptic) {
    out.orbit_class = OrbitClass::elliptic;
  } else if (on_circle == 2 && out.multiplicity_of_one == 2) {
    out.orbit_class = OrbitClass::hyperbolic;
  } else {
    out.orbit_class = OrbitClass::mixed;
  }
  return out;
}

KreinSignature krein_signs(const Matrix& m, Complex omega, double tol) {
  const int n = half_dimension(m, "krein_signs");
  int mult = 0;
  for (const auto& c : cluster_eigenvalues(m)) {
    if (std::abs(c.value - omega) < std::max(tol, kClusterTol)) mult = c.multiplicity;
  }
  if (mult == 0) throw PreconditionError("krein_signs: omega is not an eigenvalue");
  const CMatrix a = shifted(m, omega);
  CMatrix power = CMatrix::Identity(2 * n, 2 * n);
  for (int i = 0; i < mult; ++i) power = power * a;
  const CMatrix v = kernel_basis<CMatrix>(power, mult);
  const CMatrix j = standard_J(n).cast<Complex>();
  CMatrix h = Complex(0, 1) * (v.adjoint() * j * v);
  h = (0.5 * (h + h.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  KreinSignature out{omega, 0, 0};
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    (es.eigenvalues()[i] > 0 ? out.pos : out.neg) += 1;
  }
  return out;
}

NormalFormDecomposition recover_decomposition(const Matrix& m, double tol) {
  const int n = half_dimension(m, "recover_decomposition");
  const Matrix j = standard_J(n);
  NormalFormDecomposition dec;
  dec.n = n;
  const double angle_radius = 1e-10;

  for (const auto& c : cluster_eigenvalues(m)) {
    const double modulus = std::abs(c.value);
    const bool on_u = std::abs(modulus - 1.0) <= kCircleTol * 1e3;
    if (!on_u) {
      dec.hyp_dim += c.multiplicity;
      continue;
    }
    const Complex omega = c.value / modulus;
    const bool plus_one = std::abs(omega - Complex(1, 0)) < kClusterTol;
    const bool minus_one = std::abs(omega + Complex(1, 0)) < kClusterTol;
    if (plus_one || minus_one) {
      const double lambda = plus_one ? 1.0 : -1.0;
      if (c.multiplicity != 2) {
        throw UnsupportedStructure("eigenvalue " + std::to_string(static_cast<int>(lambda)) +
                                   " has algebraic multiplicity " + std::to_string(c.multiplicity) +
                                   "; only multiplicity 2 is supported");
      }
      Matrix a = m;
      a.diagonal().array() -= lambda;
      const int g = geometric_multiplicity(a.cast<Complex>(), tol);
      int& semisimple = plus_one ? dec.p_zero : dec.q_zero;
      int& positive = plus_one ? dec.p_minus : dec.q_minus;
      int& negative = plus_one ? dec.p_plus : dec.q_plus;
      if (g == 2) {
        semisimple += 1;
      } else if (g == 1) {
        const Eigen::VectorXd w = jordan_top<Matrix>(a);
        const double s = w.dot(j * (a * w));
        (s > 0 ? positive : negative) += 1;
      } else {
        throw UnsupportedStructure("unexpected Jordan structure at eigenvalue +-1");
      }
      continue;
    }
    if (c.value.imag() < 0) continue;  // handled with its conjugate
    const double theta = std::arg(omega);
    const CMatrix a = shifted(m, omega);
    const int g = geometric_multiplicity(a, tol);
    if (g == c.multiplicity) {
      const KreinSignature ks = krein_signs(m, omega, tol);
      for (int i = 0; i < ks.neg; ++i) dec.thetas.push_back(Angle::from_radians(theta, angle_radius));
      for (int i = 0; i < ks.pos; ++i) {
        dec.thetas.push_back(Angle::from_radians(2.0 * std::numbers::pi - theta, angle_radius));
      }
    } else if (c.multiplicity == 2 && g == 1) {
      const Eigen::VectorXcd w = jordan_top<CMatrix>(a);
      const CMatrix jc = j.cast<Complex>();
      const Complex form = (w.adjoint() * jc * a * w)(0, 0);
      const double kappa = (-std::conj(omega) * form).real();
      const Angle angle = Angle::from_radians(theta, angle_radius);
      (kappa > 0 ? dec.betas : dec.alphas).push_back(angle);
    } else {
      throw UnsupportedStructure("unit-circle eigenvalue with Jordan structure beyond a single 2-block");
    }
  }
  auto by_value = [](const Angle& x, const Angle& y) { return x.to_double() < y.to_double(); };
  std::sort(dec.thetas.begin(), dec.thetas.end(), by_value);
  std::sort(dec.alphas.begin(), dec.alphas.end(), by_value);
  std::sort(dec.betas.begin(), dec.betas.end(), by_value);
  const int total = dec.p_minus + dec.p_zero + dec.p_plus + dec.q_minus + dec.q_zero + dec.q_plus +
                    dec.r() + 2 * dec.r_star() + 2 * dec.r_zero() + dec.hyp_dim / 2;
  if (total != n || dec.hyp_dim % 2 != 0) {
    throw UnsupportedStructure("recovered blocks do not account for the full dimension");
  }
  return dec;
}

Matrix random_symplectic(int n, unsigned seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  Matrix s(2 * n, 2 * n);
  for (int i = 0; i < 2 * n; ++i) {
    for (int k = i; k < 2 * n; ++k) s(i, k) = s(k, i) = dist(rng);
  }
  const Matrix gen = standard_J(n) * s;
  return gen.exp();
}

}  // namespace sik
