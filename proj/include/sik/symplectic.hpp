#pragma once

#include <complex>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "sik/angle.hpp"
#include "sik/decomposition.hpp"

namespace sik {

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

inline constexpr double kSymplecticTol = 1e-10;

/// Dense 2n x 2n real matrix satisfying M^T J M = J, coordinates ordered
/// (x_1..x_n, y_1..y_n).
class SymplecticMatrix {
 public:
  /// Validates the symplectic constraint; throws InputError on violation.
  explicit SymplecticMatrix(Matrix m, double tol = kSymplecticTol);

  int n() const { return n_; }
  const Matrix& matrix() const { return m_; }
  /// max |M^T J M - J|
  double symplectic_defect() const;

  SymplecticMatrix operator*(const SymplecticMatrix& other) const;
  SymplecticMatrix inverse() const;
  SymplecticMatrix power(int m) const;

 private:
  int n_;
  Matrix m_;
};

/// [[0, -I_n], [I_n, 0]]
Matrix standard_J(int n);

/// max-abs deviation of M^T J M from J.
double symplectic_defect(const Matrix& m);

/// Interleaved direct sum preserving the (x, y) block convention.
Matrix diamond(const Matrix& a, const Matrix& b);
Matrix diamond(const std::vector<Matrix>& parts);

/// Rotation R(theta) in radians.
Matrix rotation(double theta);

enum class Triviality { trivial, nontrivial };

/// Basic normal-form blocks.
struct BlockN1 {
  int lambda;  ///< +1 or -1
  double b;
};
struct BlockD {
  double lambda;  ///< real, not in {0, +1, -1}
};
struct BlockR {
  Angle theta;  ///< turns in (0,1) minus {1/2}
};
struct BlockN2 {
  Angle theta;
  Eigen::Matrix2d B;
  Triviality triviality;
};

class BasicBlock {
 public:
  using Variant = std::variant<BlockN1, BlockD, BlockR, BlockN2>;

  static BasicBlock n1(int lambda, double b);
  static BasicBlock d(double lambda);
  static BasicBlock r(const Angle& theta);
  /// B must make the 4x4 block symplectic: (b2-b3) cos(theta) = -(b1+b4) sin(theta).
  /// Triviality is derived from sign((b2 - b3) sin(theta)); zero is rejected.
  static BasicBlock n2(const Angle& theta, const Eigen::Matrix2d& B);
  /// Convenience N2 with given triviality and a canonical symplectic B.
  static BasicBlock n2(const Angle& theta, Triviality triviality, double scale = 1.0);

  const Variant& variant() const { return v_; }
  /// Half-dimension of the block (1 or 2).
  int half_dim() const;

 private:
  explicit BasicBlock(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

Matrix materialize(const BasicBlock& block);
Matrix materialize(const std::vector<BasicBlock>& blocks);

/// Normal-form decomposition implied by a list of basic blocks (D blocks
/// count toward hyp_dim).
NormalFormDecomposition decomposition_of(const std::vector<BasicBlock>& blocks);

struct FloquetMultiplier {
  Complex value;
  int multiplicity = 1;
  bool on_unit_circle = false;
};

inline constexpr double kCircleTol = 1e-9;

/// Eigenvalues clustered by proximity, with algebraic multiplicities.
std::vector<FloquetMultiplier> floquet_spectrum(const Matrix& m, double tol = kCircleTol);

enum class OrbitClass { elliptic, hyperbolic, irrationally_elliptic, mixed };

const char* to_string(OrbitClass c);

struct Classification {
  bool nondegenerate = false;
  OrbitClass orbit_class = OrbitClass::mixed;
  bool elliptic = false;
  /// Smallest ||lambda| - 1| among multipliers declared off U (infinity if
  /// none) and largest among those declared on U.
  double circle_margin = 0.0;
  double circle_defect = 0.0;
  int multiplicity_of_one = 0;
};

/// Classifies a closed-characteristic monodromy. Throws PreconditionError when
/// 1 is not a multiplier of multiplicity >= 2.
Classification classify(const Matrix& m, double tol = kCircleTol,
                        const RationalityConfig& rcfg = kDoubleRationality);

struct KreinSignature {
  Complex omega;
  int pos = 0;
  int neg = 0;
};

/// Signature of xi -> i (J xi) . conj(xi) on the root space of omega.
KreinSignature krein_signs(const Matrix& m, Complex omega, double tol = 1e-7);

/// Recovers the normal-form decomposition of a symplectic matrix in the
/// supported cases (one-eigenvalue and minus-one parts of multiplicity <= 2,
/// circle eigenvalues that are semisimple or single Jordan 2-blocks, and a
/// hyperbolic remainder). Throws UnsupportedStructure otherwise.
NormalFormDecomposition recover_decomposition(const Matrix& m, double tol = 1e-7);

/// Random symplectic matrix exp(J S) with S symmetric, entries scaled.
Matrix random_symplectic(int n, unsigned seed, double scale = 0.5);

}  // namespace sik
