#include "jumpcompare/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace jumpcompare {

namespace {

std::optional<std::size_t> locate(const std::string& text, const std::string& pointer) {
  if (text.empty()) return std::nullopt;
  std::size_t pos = 0;
  bool found = false;
  std::stringstream tokens(pointer);
  std::string token;
  while (std::getline(tokens, token, '/')) {
    if (token.empty() || std::all_of(token.begin(), token.end(), ::isdigit)) continue;
    const auto next = text.find("\"" + token + "\"", pos);
    if (next == std::string::npos) break;
    pos = next;
    found = true;
  }
  if (!found) return std::nullopt;
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    const auto line = locate(text_, pointer);
    std::string what = (pointer.empty() ? "/" : pointer) + ": " + message;
    if (line) what = "line " + std::to_string(*line) + ", " + what;
    throw SchemaError(pointer, line, what);
  }

  void object(const Json& j, const std::string& ptr, std::initializer_list<const char*> allowed) const {
    if (!j.is_object()) fail(ptr, "expected an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : j.items()) {
      if (!keys.count(item.key())) fail(ptr + "/" + item.key(), "unknown key '" + item.key() + "'");
    }
  }

  double number(const Json& j, const std::string& ptr) const {
    if (!j.is_number()) fail(ptr, "expected a number");
    return j.get<double>();
  }

  std::uint64_t unsigned_integer(const Json& j, const std::string& ptr) const {
    if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
      fail(ptr, "expected a non-negative integer");
    }
    return j.get<std::uint64_t>();
  }

  int dimension(const Json& j, const std::string& ptr) const {
    const auto v = unsigned_integer(j, ptr);
    if (v < 1 || v > 64) fail(ptr, "dimension must be between 1 and 64");
    return static_cast<int>(v);
  }

  Vec vector(const Json& j, const std::string& ptr, Eigen::Index size) const {
    if (!j.is_array()) fail(ptr, "expected an array of numbers");
    if (static_cast<Eigen::Index>(j.size()) != size) {
      fail(ptr, "expected length " + std::to_string(size) + ", got " + std::to_string(j.size()));
    }
    Vec out(size);
    for (Eigen::Index i = 0; i < size; ++i) out[i] = number(j[static_cast<std::size_t>(i)], ptr + "/" + std::to_string(i));
    return out;
  }

  Mat matrix(const Json& j, const std::string& ptr, Eigen::Index rows, Eigen::Index cols) const {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
      fail(ptr, "expected " + std::to_string(rows) + " rows");
    }
    Mat out(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      out.row(r) = vector(j[static_cast<std::size_t>(r)], ptr + "/" + std::to_string(r), cols).transpose();
    }
    return out;
  }

  std::vector<Mat> matrices(const Json& j, const std::string& ptr, std::size_t count, Eigen::Index n) const {
    if (!j.is_array() || j.size() != count) fail(ptr, "expected " + std::to_string(count) + " matrices");
    std::vector<Mat> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(matrix(j[i], ptr + "/" + std::to_string(i), n, n));
    return out;
  }

  RegularityBudget budget(const Json& j, const std::string& ptr, std::size_t atoms) const {
    object(j, ptr, {"mu", "rho"});
    RegularityBudget b;
    if (!j.contains("mu")) fail(ptr, "missing key 'mu'");
    b.mu = number(j["mu"], ptr + "/mu");
    if (j.contains("rho")) {
      const Vec rho = vector(j["rho"], ptr + "/rho", static_cast<Eigen::Index>(atoms));
      b.rho.assign(rho.data(), rho.data() + rho.size());
    } else {
      b.rho.assign(atoms, 0.0);
    }
    return b;
  }

 private:
  const std::string& text_;
};

Json to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json to_json(const Mat& a) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) out.push_back(to_json(Vec(a.row(r).transpose())));
  return out;
}

Json to_json(const RegularityBudget& b) {
  Json out;
  out["mu"] = b.mu;
  out["rho"] = Json(b.rho);
  return out;
}

// Matrix coefficient pieces: linear map on svec coordinates, given in full or
// as a multiple of the identity, plus a symmetric constant.
struct AffinePiece {
  Mat linear;
  SymMatrix constant;
};

AffinePiece read_piece(const Reader& r, const Json& j, const std::string& ptr, int m) {
  r.object(j, ptr, {"linear", "scale", "constant"});
  const int n = svec_size(m);
  AffinePiece out{Mat::Zero(n, n), SymMatrix(m)};
  if (j.contains("linear") && j.contains("scale")) r.fail(ptr, "give either 'linear' or 'scale', not both");
  if (j.contains("linear")) out.linear = r.matrix(j["linear"], ptr + "/linear", n, n);
  if (j.contains("scale")) out.linear = r.number(j["scale"], ptr + "/scale") * Mat::Identity(n, n);
  if (j.contains("constant")) {
    const Mat c = r.matrix(j["constant"], ptr + "/constant", m, m);
    try {
      out.constant = SymMatrix::from_dense(c);
    } catch (const DimensionMismatch& e) {
      r.fail(ptr + "/constant", e.what());
    }
  }
  return out;
}

Json piece_json(const Mat& linear, const SymMatrix& constant) {
  Json out;
  const double s = linear.rows() > 0 ? linear(0, 0) : 0.0;
  if (linear == s * Mat::Identity(linear.rows(), linear.cols())) {
    out["scale"] = s;
  } else {
    out["linear"] = to_json(linear);
  }
  out["constant"] = to_json(constant.dense());
  return out;
}

VectorModelBlock read_vector_model(const Reader& r, const Json& j, const std::string& ptr, int m, int d,
                                   std::size_t atoms) {
  r.object(j, ptr, {"B", "c", "V", "U", "G", "g", "budget"});
  VectorModelBlock out;
  out.affine = AffineCoefficients::zeros(m, d, atoms);
  auto& a = out.affine;
  if (j.contains("B")) a.B = r.matrix(j["B"], ptr + "/B", m, m);
  if (j.contains("c")) a.c = r.vector(j["c"], ptr + "/c", m);
  if (j.contains("V")) a.V = r.matrices(j["V"], ptr + "/V", static_cast<std::size_t>(d), m);
  if (j.contains("U")) a.U = r.matrix(j["U"], ptr + "/U", m, d);
  if (j.contains("G")) a.G = r.matrices(j["G"], ptr + "/G", atoms, m);
  if (j.contains("g")) {
    const auto& g = j["g"];
    if (!g.is_array() || g.size() != atoms) r.fail(ptr + "/g", "expected one vector per atom");
    for (std::size_t k = 0; k < atoms; ++k) a.g[k] = r.vector(g[k], ptr + "/g/" + std::to_string(k), m);
  }
  if (j.contains("budget")) out.budget = r.budget(j["budget"], ptr + "/budget", atoms);
  return out;
}

MatrixModelBlock read_matrix_model(const Reader& r, const Json& j, const std::string& ptr, int m,
                                   std::size_t atoms) {
  r.object(j, ptr, {"drift", "diffusion", "jumps", "budget"});
  MatrixModelBlock out;
  out.affine = MatrixAffine::zeros(m, atoms);
  auto& a = out.affine;
  if (j.contains("drift")) {
    auto p = read_piece(r, j["drift"], ptr + "/drift", m);
    a.drift_linear = p.linear;
    a.drift_constant = p.constant;
  }
  if (j.contains("diffusion")) {
    auto p = read_piece(r, j["diffusion"], ptr + "/diffusion", m);
    a.diffusion_linear = p.linear;
    a.diffusion_constant = p.constant;
  }
  if (j.contains("jumps")) {
    const auto& js = j["jumps"];
    if (!js.is_array() || js.size() != atoms) r.fail(ptr + "/jumps", "expected one jump block per atom");
    for (std::size_t k = 0; k < atoms; ++k) {
      auto p = read_piece(r, js[k], ptr + "/jumps/" + std::to_string(k), m);
      a.jump_linear[k] = p.linear;
      a.jump_constant[k] = p.constant;
    }
  }
  if (j.contains("budget")) out.budget = r.budget(j["budget"], ptr + "/budget", atoms);
  return out;
}

SdeModel vector_model(const VectorModelBlock& block, const MarkMeasure& marks) {
  SdeModel model = make_affine_model(block.affine, marks);
  if (block.budget) model.budget = *block.budget;
  return model;
}

MatrixModel matrix_model(const MatrixModelBlock& block, const MarkMeasure& marks) {
  MatrixModel model = MatrixModel::from_affine(block.affine, marks);
  if (!block.budget) return model;
  // A stated budget replaces the certified one.
  const auto& v = model.vector_model();
  return MatrixModel::from_functions(
      model.order(), [model](double t, const SymMatrix& x) { return model.drift(t, x); },
      [model](double t, const SymMatrix& x) { return model.diffusion(t, x); },
      [model](double t, const SymMatrix& x, std::size_t atom) { return model.jump(t, x, atom); }, v.marks,
      *block.budget);
}

SampleDomain sampling_of(const CheckBlock& c) {
  SampleDomain s;
  s.box = c.box;
  s.count = c.samples;
  s.ladder = c.ladder ? *c.ladder : default_ladder(c.box);
  s.seed = c.seed;
  return s;
}

bool same(const Mat& a, const Mat& b) { return a.rows() == b.rows() && a.cols() == b.cols() && a == b; }
bool same(const Vec& a, const Vec& b) { return a.size() == b.size() && a == b; }

bool same(const std::vector<Mat>& a, const std::vector<Mat>& b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](const Mat& x, const Mat& y) { return same(x, y); });
}

bool same(const std::optional<RegularityBudget>& a, const std::optional<RegularityBudget>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || (a->mu == b->mu && a->rho == b->rho);
}

bool same(const VectorModelBlock& a, const VectorModelBlock& b) {
  const auto &x = a.affine, &y = b.affine;
  if (x.g.size() != y.g.size()) return false;
  for (std::size_t k = 0; k < x.g.size(); ++k) {
    if (!same(x.g[k], y.g[k])) return false;
  }
  return same(x.B, y.B) && same(x.c, y.c) && same(x.V, y.V) && same(x.U, y.U) && same(x.G, y.G) &&
         same(a.budget, b.budget);
}

bool same(const MatrixModelBlock& a, const MatrixModelBlock& b) {
  const auto &x = a.affine, &y = b.affine;
  return same(x.drift_linear, y.drift_linear) && x.drift_constant == y.drift_constant &&
         same(x.diffusion_linear, y.diffusion_linear) && x.diffusion_constant == y.diffusion_constant &&
         same(x.jump_linear, y.jump_linear) && x.jump_constant == y.jump_constant && same(a.budget, b.budget);
}

}  // namespace

std::string_view to_string(ScenarioKind kind) { return kind == ScenarioKind::Vector ? "vector" : "matrix"; }

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  if (a.id != b.id || a.kind != b.kind || a.m != b.m || a.d != b.d || a.t0 != b.t0 || a.horizon != b.horizon) {
    return false;
  }
  if (a.marks.dimension != b.marks.dimension || a.marks.atoms.size() != b.marks.atoms.size()) return false;
  for (std::size_t j = 0; j < a.marks.atoms.size(); ++j) {
    if (!same(a.marks.atoms[j].mark, b.marks.atoms[j].mark) || a.marks.atoms[j].weight != b.marks.atoms[j].weight) {
      return false;
    }
  }
  const bool models = a.kind == ScenarioKind::Vector
                          ? same(a.vector1, b.vector1) && same(a.vector2, b.vector2)
                          : same(a.matrix1, b.matrix1) && same(a.matrix2, b.matrix2);
  return models && same(a.x1, b.x1) && same(a.x2, b.x2) && a.mc.paths == b.mc.paths && a.mc.step == b.mc.step &&
         a.mc.seed == b.mc.seed && a.mc.eps_path == b.mc.eps_path && a.check.samples == b.check.samples &&
         a.check.box == b.check.box && a.check.ladder == b.check.ladder && a.check.seed == b.check.seed &&
         a.check.eps_check == b.check.eps_check && a.check.cstar == b.check.cstar;
}

ComparisonProblem ScenarioConfig::vector_problem() const {
  if (kind != ScenarioKind::Vector) throw ModelError("scenario '" + id + "' is not a vector scenario");
  ComparisonProblem p;
  p.model1 = vector_model(vector1, marks);
  p.model2 = vector_model(vector2, marks);
  p.t0 = t0;
  p.horizon = horizon;
  p.x1 = x1.col(0);
  p.x2 = x2.col(0);
  p.sampling = sampling_of(check);
  p.tolerances.eps_check = check.eps_check;
  p.tolerances.eps_path = mc.eps_path;
  p.cstar_override = check.cstar;
  return p;
}

MatrixComparisonProblem ScenarioConfig::matrix_problem() const {
  if (kind != ScenarioKind::Matrix) throw ModelError("scenario '" + id + "' is not a matrix scenario");
  MatrixComparisonProblem p;
  p.model1 = matrix_model(matrix1, marks);
  p.model2 = matrix_model(matrix2, marks);
  p.t0 = t0;
  p.horizon = horizon;
  p.x1 = SymMatrix::from_dense(x1);
  p.x2 = SymMatrix::from_dense(x2);
  p.sampling = sampling_of(check);
  p.tolerances.eps_check = check.eps_check;
  p.tolerances.eps_path = mc.eps_path;
  p.cstar_override = check.cstar;
  return p;
}

ScenarioConfig from_json(const Json& doc, const std::string& source_text) {
  const Reader r(source_text);
  r.object(doc, "", {"id", "kind", "m", "d", "horizon", "marks", "model1", "model2", "initial", "mc", "check"});
  for (const char* key : {"kind", "m", "model1", "model2", "initial"}) {
    if (!doc.contains(key)) r.fail("", std::string("missing key '") + key + "'");
  }

  ScenarioConfig c;
  if (doc.contains("id")) {
    if (!doc["id"].is_string()) r.fail("/id", "expected a string");
    c.id = doc["id"].get<std::string>();
  }
  const auto& kind = doc["kind"];
  if (kind == "vector") {
    c.kind = ScenarioKind::Vector;
  } else if (kind == "matrix") {
    c.kind = ScenarioKind::Matrix;
  } else {
    r.fail("/kind", "expected \"vector\" or \"matrix\"");
  }
  c.m = r.dimension(doc["m"], "/m");
  if (doc.contains("d")) c.d = r.dimension(doc["d"], "/d");
  if (c.kind == ScenarioKind::Matrix && c.d != 1) r.fail("/d", "matrix scenarios use d = 1");

  if (doc.contains("horizon")) {
    const auto& h = doc["horizon"];
    r.object(h, "/horizon", {"t0", "T"});
    if (h.contains("t0")) c.t0 = r.number(h["t0"], "/horizon/t0");
    if (h.contains("T")) c.horizon = r.number(h["T"], "/horizon/T");
    if (!(c.t0 >= 0.0) || !(c.horizon > c.t0)) r.fail("/horizon", "need 0 <= t0 < T");
  }

  if (doc.contains("marks")) {
    const auto& mk = doc["marks"];
    r.object(mk, "/marks", {"dimension", "atoms"});
    if (mk.contains("dimension")) c.marks.dimension = r.dimension(mk["dimension"], "/marks/dimension");
    if (mk.contains("atoms")) {
      const auto& atoms = mk["atoms"];
      if (!atoms.is_array()) r.fail("/marks/atoms", "expected an array");
      for (std::size_t j = 0; j < atoms.size(); ++j) {
        const std::string ptr = "/marks/atoms/" + std::to_string(j);
        r.object(atoms[j], ptr, {"mark", "weight"});
        if (!atoms[j].contains("mark") || !atoms[j].contains("weight")) r.fail(ptr, "atoms need 'mark' and 'weight'");
        c.marks.atoms.push_back(
            {r.vector(atoms[j]["mark"], ptr + "/mark", c.marks.dimension), r.number(atoms[j]["weight"], ptr + "/weight")});
      }
    }
  }
  const std::size_t atoms = c.marks.size();

  if (c.kind == ScenarioKind::Vector) {
    c.vector1 = read_vector_model(r, doc["model1"], "/model1", c.m, c.d, atoms);
    c.vector2 = read_vector_model(r, doc["model2"], "/model2", c.m, c.d, atoms);
  } else {
    c.matrix1 = read_matrix_model(r, doc["model1"], "/model1", c.m, atoms);
    c.matrix2 = read_matrix_model(r, doc["model2"], "/model2", c.m, atoms);
  }

  const auto& init = doc["initial"];
  r.object(init, "/initial", {"x1", "x2"});
  if (!init.contains("x1") || !init.contains("x2")) r.fail("/initial", "need both 'x1' and 'x2'");
  if (c.kind == ScenarioKind::Vector) {
    c.x1 = r.vector(init["x1"], "/initial/x1", c.m);
    c.x2 = r.vector(init["x2"], "/initial/x2", c.m);
  } else {
    c.x1 = r.matrix(init["x1"], "/initial/x1", c.m, c.m);
    c.x2 = r.matrix(init["x2"], "/initial/x2", c.m, c.m);
    for (const char* key : {"x1", "x2"}) {
      const Mat& x = std::string(key) == "x1" ? c.x1 : c.x2;
      if (x != x.transpose()) {
        r.fail(std::string("/initial/") + key, "matrix must be symmetric");
      }
    }
  }

  if (doc.contains("mc")) {
    const auto& mc = doc["mc"];
    r.object(mc, "/mc", {"paths", "step", "seed", "eps_path"});
    if (mc.contains("paths")) c.mc.paths = r.unsigned_integer(mc["paths"], "/mc/paths");
    if (mc.contains("step")) c.mc.step = r.number(mc["step"], "/mc/step");
    if (mc.contains("seed")) c.mc.seed = r.unsigned_integer(mc["seed"], "/mc/seed");
    if (mc.contains("eps_path")) c.mc.eps_path = r.number(mc["eps_path"], "/mc/eps_path");
    if (c.mc.paths < 1) r.fail("/mc/paths", "need at least one path");
    if (!(c.mc.step > 0.0) || c.mc.step > c.horizon - c.t0) r.fail("/mc/step", "need 0 < step <= T - t0");
  }

  if (doc.contains("check")) {
    const auto& ck = doc["check"];
    r.object(ck, "/check", {"samples", "box", "ladder", "seed", "eps_check", "cstar"});
    if (ck.contains("samples")) c.check.samples = r.unsigned_integer(ck["samples"], "/check/samples");
    if (ck.contains("box")) c.check.box = r.number(ck["box"], "/check/box");
    if (ck.contains("ladder")) {
      const auto& l = ck["ladder"];
      if (!l.is_array()) r.fail("/check/ladder", "expected an array");
      const Vec v = r.vector(l, "/check/ladder", static_cast<Eigen::Index>(l.size()));
      c.check.ladder = std::vector<double>(v.data(), v.data() + v.size());
    }
    if (ck.contains("seed")) c.check.seed = r.unsigned_integer(ck["seed"], "/check/seed");
    if (ck.contains("eps_check")) c.check.eps_check = r.number(ck["eps_check"], "/check/eps_check");
    if (ck.contains("cstar")) c.check.cstar = r.number(ck["cstar"], "/check/cstar");
    if (!(c.check.box > 0.0)) r.fail("/check/box", "box half-width must be positive");
    if (c.check.samples < 1) r.fail("/check/samples", "need at least one sample");
  }

  // Model-level validation; ordering failures keep their own type.
  try {
    if (c.kind == ScenarioKind::Vector) {
      validate_problem(c.vector_problem());
    } else {
      validate_matrix_problem(c.matrix_problem());
    }
  } catch (const OrderError&) {
    throw;
  } catch (const NegativeWeight& e) {
    r.fail("/marks/atoms", e.what());
  } catch (const ZeroMark& e) {
    r.fail("/marks/atoms", e.what());
  } catch (const ModelError& e) {
    r.fail("", e.what());
  }
  return c;
}

ScenarioConfig parse_config_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto offset = std::min<std::size_t>(e.byte, text.size());
    const auto begin = text.begin();
    const auto end = begin + static_cast<std::ptrdiff_t>(offset);
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(begin, end, '\n'));
    const auto last_newline = text.rfind('\n', offset == 0 ? 0 : offset - 1);
    const std::size_t column = last_newline == std::string::npos || offset == 0 ? offset : offset - last_newline - 1;
    throw ParseError(line, column, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                                       e.what());
  }
  return from_json(doc, text);
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

Json to_json(const ScenarioConfig& c) {
  Json out;
  out["id"] = c.id;
  out["kind"] = std::string(to_string(c.kind));
  out["m"] = c.m;
  out["d"] = c.d;
  out["horizon"] = {{"t0", c.t0}, {"T", c.horizon}};
  Json atoms = Json::array();
  for (const auto& a : c.marks.atoms) atoms.push_back({{"mark", to_json(a.mark)}, {"weight", a.weight}});
  out["marks"] = {{"dimension", c.marks.dimension}, {"atoms", atoms}};

  auto vector_block = [](const VectorModelBlock& b) {
    Json j;
    j["B"] = to_json(b.affine.B);
    j["c"] = to_json(b.affine.c);
    j["V"] = Json::array();
    for (const auto& v : b.affine.V) j["V"].push_back(to_json(v));
    j["U"] = to_json(b.affine.U);
    j["G"] = Json::array();
    for (const auto& g : b.affine.G) j["G"].push_back(to_json(g));
    j["g"] = Json::array();
    for (const auto& g : b.affine.g) j["g"].push_back(to_json(g));
    if (b.budget) j["budget"] = to_json(*b.budget);
    return j;
  };
  auto matrix_block = [](const MatrixModelBlock& b) {
    Json j;
    j["drift"] = piece_json(b.affine.drift_linear, b.affine.drift_constant);
    j["diffusion"] = piece_json(b.affine.diffusion_linear, b.affine.diffusion_constant);
    j["jumps"] = Json::array();
    for (std::size_t k = 0; k < b.affine.jump_linear.size(); ++k) {
      j["jumps"].push_back(piece_json(b.affine.jump_linear[k], b.affine.jump_constant[k]));
    }
    if (b.budget) j["budget"] = to_json(*b.budget);
    return j;
  };
  if (c.kind == ScenarioKind::Vector) {
    out["model1"] = vector_block(c.vector1);
    out["model2"] = vector_block(c.vector2);
    out["initial"] = {{"x1", to_json(Vec(c.x1.col(0)))}, {"x2", to_json(Vec(c.x2.col(0)))}};
  } else {
    out["model1"] = matrix_block(c.matrix1);
    out["model2"] = matrix_block(c.matrix2);
    out["initial"] = {{"x1", to_json(c.x1)}, {"x2", to_json(c.x2)}};
  }

  Json mc = {{"paths", c.mc.paths}, {"step", c.mc.step}, {"seed", c.mc.seed}};
  if (c.mc.eps_path) mc["eps_path"] = *c.mc.eps_path;
  out["mc"] = mc;
  Json check = {{"samples", c.check.samples}, {"box", c.check.box}};
  if (c.check.ladder) check["ladder"] = Json(*c.check.ladder);
  check["seed"] = c.check.seed;
  if (c.check.eps_check) check["eps_check"] = *c.check.eps_check;
  if (c.check.cstar) check["cstar"] = *c.check.cstar;
  out["check"] = check;
  return out;
}

std::string serialize(const ScenarioConfig& config) { return to_json(config).dump(2) + "\n"; }

}  // namespace jumpcompare
