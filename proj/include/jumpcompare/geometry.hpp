#pragma once

// Geometry of K = R^m_+ x R^m, the set the ordered pair (X1 - X2, X2) must
// stay in for the comparison property to hold.

#include "jumpcompare/model.hpp"

#include <vector>

namespace jumpcompare {

struct ConePoint {
  Vec x1;  // difference block
  Vec x2;

  int dim() const { return static_cast<int>(x1.size()); }
  Vec packed() const;
  static ConePoint unpack(const Vec& packed);
};

struct HessianDiag {
  std::vector<double> diag;  // 2m entries, each 0 or 2
  bool boundary = false;     // some x1_k == 0: the Hessian does not exist there
};

Vec positive_part(const Vec& v);
Vec negative_part(const Vec& v);

ConePoint project_onto_K(const ConePoint& x);
double dist2_K(const ConePoint& x);
Vec grad_dist2_K(const ConePoint& x);
//! One-sided value on {x1_k = 0} plus the boundary flag.
HessianDiag hess_dist2_K(const ConePoint& x);

}  // namespace jumpcompare
