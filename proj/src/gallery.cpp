#include "jumpcompare/gallery.hpp"

namespace jumpcompare {

namespace {

Mat scalar(double v) { return Mat::Constant(1, 1, v); }
Vec vec1(double v) { return Vec::Constant(1, v); }

MarkMeasure one_atom(double weight) {
  MarkMeasure marks;
  marks.atoms.push_back({vec1(1.0), weight});
  return marks;
}

ScenarioConfig scalar_base(std::string id, MarkMeasure marks, double x1, double x2, std::uint64_t seed) {
  ScenarioConfig c;
  c.id = std::move(id);
  c.kind = ScenarioKind::Vector;
  c.m = 1;
  c.d = 1;
  c.marks = std::move(marks);
  c.x1 = vec1(x1);
  c.x2 = vec1(x2);
  c.mc.seed = seed;
  return c;
}

VectorModelBlock scalar_model(double B, double c, double V, double U, const std::vector<double>& G,
                              const std::vector<double>& g) {
  VectorModelBlock block;
  auto& a = block.affine;
  a.B = scalar(B);
  a.c = vec1(c);
  a.V = {scalar(V)};
  a.U = scalar(U);
  for (double v : G) a.G.push_back(scalar(v));
  for (double v : g) a.g.push_back(vec1(v));
  return block;
}

ScenarioConfig corollary33_pass() {
  auto c = scalar_base("corollary33-pass", one_atom(1.5), 1.0, 0.5, 101);
  c.vector1 = scalar_model(-1.0, 0.5, 0.3, 0.2, {-0.5}, {0.3});
  c.vector2 = scalar_model(-1.0, 0.1, 0.3, 0.2, {-0.5}, {0.1});
  return c;
}

ScenarioConfig corollary34_pass() {
  auto c = scalar_base("corollary34-pass", one_atom(2.0), 0.5, 0.5, 102);
  c.vector1 = scalar_model(-0.5, 0.4, 0.25, 0.1, {-0.4}, {0.2});
  c.vector2 = scalar_model(-0.5, 0.0, 0.25, 0.1, {-0.4}, {0.2});
  return c;
}

ScenarioConfig corollary35_pass() {
  auto c = scalar_base("corollary35-pass", MarkMeasure{}, 0.8, 0.2, 103);
  c.vector1 = scalar_model(-1.0, 0.5, 0.5, 0.1, {}, {});
  c.vector2 = scalar_model(-1.0, 0.0, 0.5, 0.1, {}, {});
  return c;
}

// Jump-only pair: b = sum w gamma, sigma = 0, gamma1 = -x/2 + 1 >= gamma2 = -x/2 + 1/5.
ScenarioConfig example36() {
  auto c = scalar_base("example36", one_atom(1.0), 1.0, 0.5, 104);
  c.vector1 = scalar_model(-0.5, 1.0, 0.0, 0.0, {-0.5}, {1.0});
  c.vector2 = scalar_model(-0.5, 0.2, 0.0, 0.0, {-0.5}, {0.2});
  return c;
}

// x + gamma(x) = -x reverses the order at every jump.
ScenarioConfig jump_monotone_fail() {
  auto c = scalar_base("jump-monotone-fail", one_atom(1.0), 1.0, 0.0, 105);
  c.vector1 = scalar_model(-2.0, 0.0, 0.0, 0.2, {-2.0}, {0.0});
  c.vector2 = c.vector1;
  return c;
}

ScenarioConfig drift_order_fail() {
  auto c = scalar_base("drift-order-fail", MarkMeasure{}, 0.0, 0.0, 106);
  c.vector1 = scalar_model(-1.0, 0.0, 0.2, 0.3, {}, {});
  c.vector2 = scalar_model(-1.0, 1.0, 0.2, 0.3, {}, {});
  return c;
}

ScenarioConfig sigma_gap_fail() {
  auto c = scalar_base("sigma-gap-fail", MarkMeasure{}, 0.0, 0.0, 107);
  c.vector1 = scalar_model(0.0, 0.0, 0.0, 0.5, {}, {});
  c.vector2 = scalar_model(0.0, 0.0, 0.0, 0.0, {}, {});
  return c;
}

// sigma_1 = 2 x_2: the first coordinate is driven by the second.
ScenarioConfig sigma_coupling_fail() {
  ScenarioConfig c;
  c.id = "sigma-coupling-fail";
  c.kind = ScenarioKind::Vector;
  c.m = 2;
  c.d = 1;
  c.x1 = Vec::Unit(2, 1);
  c.x2 = Vec::Zero(2);
  c.mc.seed = 108;
  c.vector1.affine = AffineCoefficients::zeros(2, 1, 0);
  c.vector1.affine.V[0](0, 1) = 2.0;
  c.vector2 = c.vector1;
  return c;
}

MatrixAffine matrix_affine(double drift_scale, const Mat& drift_constant, bool with_jump) {
  const int m = 2;
  const int n = svec_size(m);
  MatrixAffine a = MatrixAffine::zeros(m, with_jump ? 1 : 0);
  a.drift_linear = drift_scale * Mat::Identity(n, n);
  a.drift_constant = SymMatrix::from_dense(drift_constant);
  a.diffusion_linear = 0.2 * Mat::Identity(n, n);
  a.diffusion_constant = 0.1 * SymMatrix::identity(m);
  if (with_jump) a.jump_linear[0] = -0.3 * Mat::Identity(n, n);
  return a;
}

ScenarioConfig matrix_base(std::string id, std::uint64_t seed) {
  ScenarioConfig c;
  c.id = std::move(id);
  c.kind = ScenarioKind::Matrix;
  c.m = 2;
  c.d = 1;
  c.mc.seed = seed;
  return c;
}

ScenarioConfig matrix_pass() {
  auto c = matrix_base("matrix-pass", 109);
  c.marks = one_atom(1.0);
  Mat shared(2, 2);
  shared << 0.1, 0.05, 0.05, 0.2;
  c.matrix1.affine = matrix_affine(-1.0, Mat::Identity(2, 2) + shared, true);
  c.matrix2.affine = matrix_affine(-1.0, shared, true);
  c.x1.resize(2, 2);
  c.x1 << 1.0, 0.2, 0.2, 0.5;
  c.x2 = Mat::Zero(2, 2);
  return c;
}

ScenarioConfig matrix_drift_fail() {
  auto c = matrix_base("matrix-drift-fail", 110);
  Mat gap = Mat::Zero(2, 2);
  gap(0, 0) = 1.0;
  gap(1, 1) = -1.0;
  c.matrix1.affine = matrix_affine(-1.0, gap, false);
  c.matrix2.affine = matrix_affine(-1.0, Mat::Zero(2, 2), false);
  c.x1 = Mat::Zero(2, 2);
  c.x2 = Mat::Zero(2, 2);
  return c;
}

}  // namespace

const std::vector<GalleryEntry>& gallery() {
  static const std::vector<GalleryEntry> entries = {
      {corollary33_pass(), true, "scalar pair with jumps, ordered jump sizes and compensated drifts"},
      {corollary34_pass(), true, "scalar pair with identical jumps"},
      {corollary35_pass(), true, "scalar pair without jumps"},
      {example36(), true, "jump-only pair with gamma1 >= gamma2 and gamma1 != gamma2"},
      {jump_monotone_fail(), false, "x + gamma(x) is decreasing in x"},
      {drift_order_fail(), false, "drift gap of -1 from equal initial states"},
      {sigma_gap_fail(), false, "different diffusion coefficients"},
      {sigma_coupling_fail(), false, "diffusion of one coordinate depends on another"},
      {matrix_pass(), true, "2x2 matrix pair with drift gap I"},
      {matrix_drift_fail(), false, "2x2 matrix pair with drift gap diag(1, -1)"},
  };
  return entries;
}

std::optional<GalleryEntry> find_gallery(std::string_view id) {
  if (id == "drift-violation") id = "drift-order-fail";
  for (const auto& e : gallery()) {
    if (e.config.id == id) return e;
  }
  return std::nullopt;
}

}  // namespace jumpcompare
