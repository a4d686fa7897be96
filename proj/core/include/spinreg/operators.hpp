#ifndef SPINREG_OPERATORS_HPP
#define SPINREG_OPERATORS_HPP

#include "spinreg/types.hpp"

namespace spinreg {

// Spin-1/2 operator algebra on the 8-dimensional register, basis |e, n1, n2>.
// All operators are dimensionless (spin units); S refers to the electron,
// I1/I2 to the nuclei.
namespace ops {

Mat8 Sz();
Mat8 Sx();
Mat8 Sp();   // raising: |Dn..> -> |Up..>
Mat8 Sm();
Mat8 Iz(int nucleus);   // nucleus is 1 or 2
Mat8 Ix(int nucleus);
Mat8 identity();

// nuclear-subspace (4x4) versions, basis |n1, n2>
Mat4 Iz4(int nucleus);
Mat4 Ix4(int nucleus);
Mat4 Iy4(int nucleus);

// single-qubit rotation exp(-i theta (cos(phi) sx + sin(phi) sy)/2) lifted to
// the nuclear 4x4 space on the given nucleus
Mat4 rotation4(int nucleus, double theta, double phi);

// projector |index><index| on the 8-dim space
Mat8 level_projector(int index);

} // namespace ops

} // namespace spinreg

#endif
