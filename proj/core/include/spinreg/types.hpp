#ifndef SPINREG_TYPES_HPP
#define SPINREG_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace spinreg {

using Complex = std::complex<double>;
using Mat8 = Eigen::Matrix<Complex, 8, 8>;
using Mat4 = Eigen::Matrix<Complex, 4, 4>;
using Mat2 = Eigen::Matrix<Complex, 2, 2>;
using Vec8 = Eigen::Matrix<Complex, 8, 1>;
using Vec4 = Eigen::Matrix<Complex, 4, 1>;

constexpr double TWO_PI = 6.283185307179586476925286766559;

// Basis convention, used everywhere: product states |e, n1, n2> with the
// electron as the slowest index,
//   index = 4*e + 2*n1 + n2,   e,n1,n2 in {0,1},  0 = down, 1 = up.
// So index 0 = |Dn dn dn>, 7 = |Up up up>.  Spin-z eigenvalue of "up" is +1/2.
struct LevelLabel {
  bool electron_up = false;
  bool nuc1_up = false;
  bool nuc2_up = false;

  static LevelLabel from_index(int i) {
    if (i < 0 || i > 7) throw std::out_of_range("LevelLabel index must be 0..7");
    return {(i & 4) != 0, (i & 2) != 0, (i & 1) != 0};
  }
  int index() const { return 4 * electron_up + 2 * nuc1_up + nuc2_up; }
  std::string to_string() const {
    std::string s;
    s += electron_up ? 'U' : 'D';
    s += nuc1_up ? 'u' : 'd';
    s += nuc2_up ? 'u' : 'd';
    return s;
  }
};

// nuclear-subspace index (electron traced out / fixed): 2*n1 + n2
inline int nuclear_index(bool n1_up, bool n2_up) { return 2 * n1_up + n2_up; }

template <typename M>
bool is_hermitian(const M& a, double rtol = 1e-12) {
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= rtol * scale;
}

template <typename M>
bool is_density_matrix(const M& rho, double trace_tol = 1e-10, double eig_floor = -1e-10) {
  if (!is_hermitian(rho, 1e-9)) return false;
  if (std::abs(rho.trace().real() - 1.0) > trace_tol) return false;
  if (std::abs(rho.trace().imag()) > trace_tol) return false;
  Eigen::SelfAdjointEigenSolver<M> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= eig_floor;
}

template <typename M>
double purity(const M& rho) {
  return (rho * rho).trace().real();
}

} // namespace spinreg

#endif
