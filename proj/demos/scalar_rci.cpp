// Smallest possible example: x+ = 0.5 x + u + d with |d| <= 1.
#include <iostream>

#include "rci/rci.hpp"

int main() {
  using namespace rci;
  const Matrix a = Matrix::Constant(1, 1, 0.5);
  const Matrix b = Matrix::Constant(1, 1, 1.0);
  const Zonotope gx(Matrix::Constant(1, 1, 100.0));
  const Zonotope gu(Matrix::Constant(1, 1, 100.0));
  const Zonotope gd(Matrix::Constant(1, 1, 1.0));

  const RciContract c = synth_single(a, b, gx, gu, gd);
  std::cout << "k = " << c.k << ", T = " << c.T << ", M = " << c.M << ", residual = " << c.residual << '\n';

  const ControlStep step = invariance_control(c, Vector::Constant(1, 0.7));
  std::cout << "x = 0.7 -> b = " << step.b.transpose() << ", u = " << step.u.transpose() << '\n';
  return 0;
}
