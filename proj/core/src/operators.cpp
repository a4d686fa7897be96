#include "spinreg/operators.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace spinreg {
namespace ops {

namespace {

Mat2 sz2() {
  Mat2 m;
  m << Complex(-0.5), Complex(0.0), Complex(0.0), Complex(0.5);
  return m;
}

Mat2 sx2() {
  Mat2 m;
  m << Complex(0.0), Complex(0.5), Complex(0.5), Complex(0.0);
  return m;
}

Mat2 sy2() {
  Mat2 m;
  m << Complex(0.0), Complex(0.0, 0.5), Complex(0.0, -0.5), Complex(0.0);
  return m;
}

Mat2 sp2() {
  // |dn> is index 0, so the raising operator has its 1 at (1, 0)
  Mat2 m = Mat2::Zero();
  m(1, 0) = Complex(1.0);
  return m;
}

Mat2 id2() { return Mat2::Identity(); }

Mat8 kron3(const Mat2& a, const Mat2& b, const Mat2& c) {
  return Eigen::kroneckerProduct(a, Eigen::kroneckerProduct(b, c).eval()).eval();
}

Mat4 kron2(const Mat2& a, const Mat2& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

} // namespace

Mat8 Sz() { return kron3(sz2(), id2(), id2()); }
Mat8 Sx() { return kron3(sx2(), id2(), id2()); }
Mat8 Sp() { return kron3(sp2(), id2(), id2()); }
Mat8 Sm() { return kron3(sp2().adjoint(), id2(), id2()); }

Mat8 Iz(int nucleus) {
  return nucleus == 1 ? kron3(id2(), sz2(), id2()) : kron3(id2(), id2(), sz2());
}

Mat8 Ix(int nucleus) {
  return nucleus == 1 ? kron3(id2(), sx2(), id2()) : kron3(id2(), id2(), sx2());
}

Mat8 identity() { return Mat8::Identity(); }

Mat4 Iz4(int nucleus) {
  return nucleus == 1 ? kron2(sz2(), id2()) : kron2(id2(), sz2());
}

Mat4 Ix4(int nucleus) {
  return nucleus == 1 ? kron2(sx2(), id2()) : kron2(id2(), sx2());
}

Mat4 Iy4(int nucleus) {
  return nucleus == 1 ? kron2(sy2(), id2()) : kron2(id2(), sy2());
}

Mat4 rotation4(int nucleus, double theta, double phi) {
  const Mat4 gen = std::cos(phi) * Ix4(nucleus) + std::sin(phi) * Iy4(nucleus);
  Eigen::SelfAdjointEigenSolver<Mat4> es(gen);
  Mat4 exp_diag = Mat4::Zero();
  for (int k = 0; k < 4; ++k)
    exp_diag(k, k) = std::exp(Complex(0.0, -theta * es.eigenvalues()(k)));
  return es.eigenvectors() * exp_diag * es.eigenvectors().adjoint();
}

Mat8 level_projector(int index) {
  Mat8 m = Mat8::Zero();
  m(index, index) = Complex(1.0);
  return m;
}

} // namespace ops
} // namespace spinreg
