#include "ttl/json_io.hpp"

#include "ttl/error.hpp"

namespace ttl {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    Integer z;
    if (z.set_str(j.get<std::string>(), 10) != 0) bad("bad integer '" + j.get<std::string>() + "'");
    return z;
  }
  bad("expected an integer");
}

Json integer_to_json(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

long long_from_json(const Json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string("expected an integer for ") + what);
  return j.get<long>();
}

}  // namespace

Json rational_to_json(const Rational& r) { return to_string(r); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) bad("expected a rational string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::exception&) {
    bad("bad rational '" + j.get<std::string>() + "'");
  }
}

Json cycnum_to_json(const CycNum& x) {
  Json terms = Json::array();
  for (const auto& t : x.terms()) {
    terms.push_back({{"order", t.order},
                     {"exp", t.exp},
                     {"num", integer_to_json(t.coeff.get_num())},
                     {"den", integer_to_json(t.coeff.get_den())},
                     {"sqrtp", t.sqrtp}});
  }
  auto z = x.to_float();
  Json out = {{"terms", terms}, {"float", {z.real(), z.imag()}}};
  if (x.has_sqrtp_part()) out["p"] = x.sqrt_prime();
  return out;
}

CycNum cycnum_from_json(const Json& j) {
  if (j.is_number_integer() || j.is_string()) return CycNum(rational_from_json(j));
  std::vector<CycNum::Term> terms;
  for (const auto& t : field(j, "terms")) {
    Integer num = integer_from_json(field(t, "num"));
    Integer den = t.contains("den") ? integer_from_json(t.at("den")) : Integer(1);
    if (den == 0) bad("zero denominator");
    Rational c(num, den);
    c.canonicalize();
    long order = long_from_json(field(t, "order"), "order");
    long e = long_from_json(field(t, "exp"), "exp");
    if (order < 1 || e < 0) bad("bad root of unity");
    int s = t.contains("sqrtp") ? static_cast<int>(long_from_json(t.at("sqrtp"), "sqrtp")) : 0;
    if (s != 0 && s != 1) bad("sqrtp must be 0 or 1");
    terms.push_back({static_cast<std::uint64_t>(order), static_cast<std::uint64_t>(e % order), c, s});
  }
  long p = j.contains("p") ? long_from_json(j.at("p"), "p") : 0;
  try {
    return CycNum::from_terms(terms, p);
  } catch (const Error& e) {
    bad(e.what());
  }
}

Json schwartz_to_json(const SchwartzFn& f) {
  Json cells = Json::array();
  for (const auto& [c, v] : f.cells()) {
    Json center = Json::array();
    for (const auto& x : c.center) center.push_back(rational_to_json(x));
    cells.push_back({{"center", center}, {"level", c.level}, {"coeff", cycnum_to_json(v)}});
  }
  return {{"n", f.dim()}, {"p", f.prime()}, {"cells", cells}};
}

SchwartzFn schwartz_from_json(const Json& j, long p) {
  int n = static_cast<int>(long_from_json(field(j, "n"), "n"));
  if (j.contains("p") && long_from_json(j.at("p"), "p") != p) bad("function prime differs from the space prime");
  std::vector<Cell> cells;
  std::vector<std::pair<Cell, CycNum>> pieces;
  for (const auto& c : field(j, "cells")) {
    RatVec center;
    for (const auto& x : field(c, "center")) center.push_back(rational_from_json(x));
    if (static_cast<int>(center.size()) != n) bad("cell center has the wrong dimension");
    int level = static_cast<int>(long_from_json(field(c, "level"), "level"));
    Cell cell = make_cell(center, level, p);
    cells.push_back(cell);
    pieces.emplace_back(cell, cycnum_from_json(field(c, "coeff")));
  }
  if (!pieces_disjoint(cells, p)) bad("cells overlap");
  return SchwartzFn::from_pieces(n, p, pieces);
}

Json quadspace_to_json(const QuadSpace& Q) {
  Json v1 = Json::array();
  for (const auto& x : Q.v1) v1.push_back(x.get_num().get_si());  // integral by construction
  return {{"p", Q.p()}, {"gram", Q.form.gram}, {"v1", v1}, {"disc", rational_to_json(Q.disc)}};
}

QuadSpace quadspace_from_json(const Json& j) {
  long p = long_from_json(field(j, "p"), "p");
  if (j.contains("planes")) {
    // catalog shorthand: hyperbolic planes plus <d_i>
    std::vector<long> diag;
    if (j.contains("diag"))
      for (const auto& x : j.at("diag")) diag.push_back(long_from_json(x, "diag entry"));
    try {
      return split_plus_diagonal(static_cast<int>(long_from_json(j.at("planes"), "planes")), diag, p);
    } catch (const Error& e) {
      bad(e.what());
    }
  }
  const Json& g = field(j, "gram");
  if (!g.is_array() || g.empty()) bad("gram must be a nonempty matrix");
  std::vector<std::vector<long>> gram;
  for (const auto& row : g) {
    if (!row.is_array() || row.size() != g.size()) bad("gram must be square");
    std::vector<long> r;
    for (const auto& x : row) r.push_back(long_from_json(x, "gram entry"));
    gram.push_back(r);
  }
  std::vector<long> v1;
  for (const auto& x : field(j, "v1")) v1.push_back(long_from_json(x, "v1 entry"));
  DiscConvention conv = DiscConvention::Bilinear;
  if (j.contains("disc_convention")) {
    std::string c = j.at("disc_convention").get<std::string>();
    if (c == "quadratic") conv = DiscConvention::QuadraticGram;
    else if (c != "bilinear") bad("disc_convention must be 'bilinear' or 'quadratic'");
  }
  try {
    return make_quadspace(gram, v1, p, conv);
  } catch (const Error& e) {
    bad(e.what());
  }
}

Json sl2_to_json(const SL2Elt& g) {
  return {{"a", to_string(g.a)}, {"b", to_string(g.b)}, {"c", to_string(g.c)}, {"d", to_string(g.d)}};
}

SL2Elt sl2_from_json(const Json& j) {
  try {
    return SL2Elt::make(rational_from_json(field(j, "a")), rational_from_json(field(j, "b")),
                        rational_from_json(field(j, "c")), rational_from_json(field(j, "d")));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    bad(e.what());
  }
}

}  // namespace ttl
