#include "weakval/cli/problem.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "weakval/cli/report.hpp"

namespace weakval::cli {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& why) {
  throw ParseError("at " + (where.empty() ? std::string("/") : where) + ": " + why);
}

Complex parse_complex(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(where, "expected a complex number as [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

bool is_vector_form(const Json& j) {
  return j.is_array() && !j.empty() && j[0].is_array() && !j[0].empty() && j[0][0].is_number();
}

Vector parse_vector(const Json& j, std::size_t d, const std::string& where) {
  if (!j.is_array() || j.size() != d) fail(where, "expected " + std::to_string(d) + " amplitudes");
  Vector v(static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < d; ++k) v(static_cast<Eigen::Index>(k)) = parse_complex(j[k], where + "/" + std::to_string(k));
  return v;
}

Matrix parse_matrix(const Json& j, std::size_t d, const std::string& where) {
  if (!j.is_array() || j.size() != d) fail(where, "expected " + std::to_string(d) + " rows");
  Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < d; ++r) {
    const std::string row = where + "/" + std::to_string(r);
    if (!j[r].is_array() || j[r].size() != d) fail(row, "expected " + std::to_string(d) + " entries");
    for (std::size_t c = 0; c < d; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parse_complex(j[r][c], row + "/" + std::to_string(c));
    }
  }
  return m;
}

RawState parse_state(const Json& j, std::size_t d, const std::string& where) {
  RawState s;
  if (is_vector_form(j)) {
    s.vector = parse_vector(j, d, where);
    s.matrix = *s.vector * s.vector->adjoint();
  } else {
    s.matrix = parse_matrix(j, d, where);
  }
  return s;
}

double parse_positive(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double x = j.get<double>();
  if (!(std::isfinite(x) && x > 0.0)) fail(where, "expected a finite positive number");
  return x;
}

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(complex_json(v(k)));
  return a;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Json state_json(const RawState& s) { return s.vector ? vector_json(*s.vector) : matrix_json(s.matrix); }

DensityOperator state_operator(const RawState& s, const Tolerances& tol, const char* which) {
  try {
    if (s.vector) return pure_to_density(StateVector::from_amplitudes(*s.vector, tol));
    return validate_density(s.matrix, tol);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(which) + " state: " + e.what());
  }
}

// Principal eigenvector of a density matrix that is pure within tolerance.
std::optional<StateVector> pure_state_of(const DensityOperator& rho, double tol) {
  const double purity = rho.matrix().cwiseAbs2().sum();
  if (std::abs(purity - 1.0) > tol) return std::nullopt;
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  Vector v = es.eigenvectors().col(es.eigenvalues().size() - 1);
  fix_phase(v);
  return StateVector::normalized(v);
}

}  // namespace

bool RawState::operator==(const RawState& o) const {
  if (vector.has_value() != o.vector.has_value()) return false;
  if (vector && *vector != *o.vector) return false;
  return matrix == o.matrix;
}

bool Problem::operator==(const Problem& o) const {
  return dimension == o.dimension && observable_name == o.observable_name &&
         observable_matrix == o.observable_matrix && pre == o.pre && post == o.post &&
         threshold == o.threshold && tol == o.tol && seed == o.seed &&
         pointer.has_value() == o.pointer.has_value() &&
         (!pointer || (pointer->width == o.pointer->width &&
                       pointer->couplings_series == o.pointer->couplings_series &&
                       pointer->coupling == o.pointer->coupling));
}

Problem parse_problem(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                     ": malformed JSON (" + e.what() + ")");
  }
  if (!j.is_object()) fail("", "expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const char* known[] = {"dimension", "observable", "pre", "post", "threshold",
                                  "tolerances", "pointer", "seed"};
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) fail("/" + it.key(), "unknown key");
  }

  Problem p;
  if (!j.contains("dimension") || !j["dimension"].is_number_unsigned() || j["dimension"].get<std::size_t>() == 0) {
    fail("/dimension", "expected a positive integer");
  }
  p.dimension = j["dimension"].get<std::size_t>();
  const std::size_t d = p.dimension;

  if (!j.contains("observable")) fail("/observable", "missing");
  if (j["observable"].is_string()) {
    p.observable_name = j["observable"].get<std::string>();
    try {
      p.observable_matrix = named_observable(p.observable_name, d).matrix();
    } catch (const Error& e) {
      fail("/observable", e.what());
    }
  } else {
    p.observable_matrix = parse_matrix(j["observable"], d, "/observable");
  }

  for (const char* key : {"pre", "post"}) {
    if (!j.contains(key)) fail(std::string("/") + key, "missing");
  }
  p.pre = parse_state(j["pre"], d, "/pre");
  p.post = parse_state(j["post"], d, "/post");

  if (j.contains("threshold")) p.threshold = parse_positive(j["threshold"], "/threshold");

  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
    if (!t.is_object()) fail("/tolerances", "expected an object");
    const std::pair<const char*, double Tolerances::*> fields[] = {
        {"norm", &Tolerances::norm}, {"herm", &Tolerances::herm},   {"psd", &Tolerances::psd},
        {"eig", &Tolerances::eig},   {"orth", &Tolerances::orth},   {"degen", &Tolerances::degen},
        {"anom", &Tolerances::anom}};
    for (auto it = t.begin(); it != t.end(); ++it) {
      bool ok = false;
      for (const auto& [name, member] : fields) {
        if (it.key() == name) {
          p.tol.*member = parse_positive(it.value(), "/tolerances/" + it.key());
          ok = true;
        }
      }
      if (!ok) fail("/tolerances/" + it.key(), "unknown tolerance");
    }
  }

  if (j.contains("pointer")) {
    const Json& pj = j["pointer"];
    if (!pj.is_object()) fail("/pointer", "expected an object");
    PointerConfig cfg;
    for (auto it = pj.begin(); it != pj.end(); ++it) {
      const std::string where = "/pointer/" + it.key();
      if (it.key() == "width") {
        cfg.width = parse_positive(it.value(), where);
      } else if (it.key() == "coupling") {
        cfg.coupling = parse_positive(it.value(), where);
      } else if (it.key() == "couplings") {
        if (!it.value().is_array()) fail(where, "expected an array");
        cfg.couplings_series.clear();
        for (std::size_t k = 0; k < it.value().size(); ++k)
          cfg.couplings_series.push_back(parse_positive(it.value()[k], where + "/" + std::to_string(k)));
      } else {
        fail(where, "unknown key");
      }
    }
    try {
      cfg.check();
    } catch (const Error& e) {
      fail("/pointer", e.what());
    }
    p.pointer = cfg;
  }

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("/seed", "expected an unsigned 64-bit integer");
    p.seed = j["seed"].get<std::uint64_t>();
  }
  return p;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  try {
    return parse_problem(os.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Observable named_observable(const std::string& name, std::size_t dim, const Tolerances& tol) {
  if (name == "pauli-x" || name == "pauli-y" || name == "pauli-z") {
    if (dim != 2) throw Error(ErrorKind::NotQubit, name + " needs dimension 2");
    const Matrix m = name == "pauli-x" ? pauli_x() : name == "pauli-y" ? pauli_y() : pauli_z();
    return eigensystem(m, tol);
  }
  if (name == "identity") return identity_observable(dim);
  if (name.rfind("proj", 0) == 0 && name.size() > 4) {
    const std::string digits = name.substr(4);
    if (digits.find_first_not_of("0123456789") == std::string::npos && digits.size() < 10) {
      const std::size_t k = std::stoul(digits);
      if (k < dim) return basis_projector(dim, k);
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown observable '" + name + "' for dimension " + std::to_string(dim));
}

Resolved resolve(const Problem& p) {
  p.tol.check();
  Observable a = p.observable_name.empty() ? eigensystem(p.observable_matrix, p.tol)
                                           : named_observable(p.observable_name, p.dimension, p.tol);
  DensityOperator pre = state_operator(p.pre, p.tol, "pre");
  DensityOperator post = state_operator(p.post, p.tol, "post");
  std::optional<StateVector> psi, phi;
  psi = p.pre.vector ? std::optional(StateVector::from_amplitudes(*p.pre.vector, p.tol)) : pure_state_of(pre, p.tol.eig);
  phi = p.post.vector ? std::optional(StateVector::from_amplitudes(*p.post.vector, p.tol)) : pure_state_of(post, p.tol.eig);
  return Resolved{std::move(a), std::move(pre), std::move(post), std::move(psi), std::move(phi)};
}

Json canonical_json(const Problem& p) {
  Json j;
  j["dimension"] = p.dimension;
  if (!p.observable_name.empty()) {
    j["observable"] = p.observable_name;
  } else {
    j["observable"] = matrix_json(p.observable_matrix);
  }
  j["pre"] = state_json(p.pre);
  j["post"] = state_json(p.post);
  j["threshold"] = p.threshold;
  j["tolerances"] = Json{{"norm", p.tol.norm}, {"herm", p.tol.herm}, {"psd", p.tol.psd}, {"eig", p.tol.eig},
                         {"orth", p.tol.orth}, {"degen", p.tol.degen}, {"anom", p.tol.anom}};
  if (p.pointer) {
    j["pointer"] = Json{{"width", p.pointer->width},
                        {"coupling", p.pointer->coupling},
                        {"couplings", p.pointer->couplings_series}};
  }
  if (p.seed) j["seed"] = *p.seed;
  return j;
}

std::string canonical_text(const Problem& p) { return dump_json(canonical_json(p)); }

}  // namespace weakval::cli
