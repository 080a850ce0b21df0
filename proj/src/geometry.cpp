#include "jumpcompare/geometry.hpp"

namespace jumpcompare {

Vec ConePoint::packed() const {
  Vec out(x1.size() + x2.size());
  out << x1, x2;
  return out;
}

ConePoint ConePoint::unpack(const Vec& packed) {
  if (packed.size() % 2 != 0) throw DimensionMismatch("packed cone point must have even length");
  const auto m = packed.size() / 2;
  return {packed.head(m), packed.tail(m)};
}

Vec positive_part(const Vec& v) { return v.cwiseMax(0.0); }

Vec negative_part(const Vec& v) { return (-v).cwiseMax(0.0); }

ConePoint project_onto_K(const ConePoint& x) { return {positive_part(x.x1), x.x2}; }

double dist2_K(const ConePoint& x) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < x.x1.size(); ++k) {
    if (x.x1[k] < 0.0) sum += x.x1[k] * x.x1[k];
  }
  return sum;
}

Vec grad_dist2_K(const ConePoint& x) {
  const auto m = x.x1.size();
  Vec grad = Vec::Zero(2 * m);
  grad.head(m) = -2.0 * negative_part(x.x1);
  return grad;
}

HessianDiag hess_dist2_K(const ConePoint& x) {
  const auto m = static_cast<std::size_t>(x.x1.size());
  HessianDiag h;
  h.diag.assign(2 * m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const double v = x.x1[static_cast<Eigen::Index>(k)];
    if (v < 0.0) h.diag[k] = 2.0;
    if (v == 0.0) h.boundary = true;
  }
  return h;
}

}  // namespace jumpcompare
