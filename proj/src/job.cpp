#include "ttl/job.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <deque>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "ttl/error.hpp"
#include "ttl/hecke.hpp"
#include "ttl/padic.hpp"
#include "ttl/transfer.hpp"

namespace ttl {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t m) { return rng() % m; }

long ipow(long p, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t i) { return seed * 0x9E3779B97F4A7C15ULL + i; }

long least_nonresidue(long p) {
  for (long u = 2;; ++u)
    if (legendre(u, p) == -1) return u;
}

}  // namespace

SchwartzFn generate_random_phi(std::uint64_t seed, const RandomPhiSpec& spec) {
  if (spec.rational_pool.empty() || spec.root_orders.empty()) throw Error(ErrorKind::InvalidArgument, "empty pool");
  if (spec.level_min < -spec.support_radius || spec.level_min > spec.level_max)
    throw Error(ErrorKind::InvalidArgument, "level range must lie in [-radius, inf)");
  std::mt19937_64 rng(seed);
  long p = spec.p;
  std::vector<Cell> cells;
  std::vector<std::pair<Cell, CycNum>> pieces;
  int want = 1 + static_cast<int>(draw(rng, spec.max_cells));
  for (int attempt = 0; attempt < 20 * want && static_cast<int>(cells.size()) < want; ++attempt) {
    int level = spec.level_min + static_cast<int>(draw(rng, spec.level_max - spec.level_min + 1));
    long range = ipow(p, spec.support_radius + level);
    RatVec center;
    for (int i = 0; i < spec.n; ++i)
      center.push_back(Rational(static_cast<long>(draw(rng, range))) / pow_p(p, spec.support_radius));
    if (spec.anchor && draw(rng, 2) == 0) {
      // v1 - (<v1,u>/q(u)) u lies on X_1
      const QuadSpace& Q = *spec.anchor;
      Rational qu = Q.q(center), pu = Q.pair(Q.v1, center);
      if (qu != 0) {
        RatVec x = Q.v1;
        for (int i = 0; i < spec.n; ++i) x[i] -= pu / qu * center[i];
        if (val_p(x, p) >= -spec.support_radius) center = x;
      }
    }
    Cell c = make_cell(center, level, p);
    bool overlap = false;
    for (const auto& o : cells)
      if (cell_contains(o, c, p) || cell_contains(c, o, p)) overlap = true;
    Rational r = spec.rational_pool[draw(rng, spec.rational_pool.size())];
    std::uint64_t N = spec.root_orders[draw(rng, spec.root_orders.size())];
    std::int64_t e = static_cast<std::int64_t>(draw(rng, N));
    if (overlap) continue;
    cells.push_back(c);
    pieces.emplace_back(c, CycNum::zeta(N, e) * CycNum(r));
  }
  return SchwartzFn::from_pieces(spec.n, p, pieces);
}

int sl2_window_cost(const SL2Elt& g, long p, int s, int r, int* s_out, int* r_out) {
  int cost = s + r;
  auto unip = [&](const Rational& b) {
    if (b == 0) return;
    int vb = val_p(b, p);
    r = std::max({r, s - vb, (-vb + 1) / 2});
    cost = std::max(cost, s + r);
  };
  auto torus = [&](const Rational& a) {
    int va = val_p(a, p);
    s += va;
    r -= va;
    cost = std::max(cost, s + r);
  };
  BruhatFactor f = bruhat_factor(g);
  unip(f.beta2);
  torus(f.alpha);
  if (f.big_cell) {
    std::swap(s, r);
    unip(f.beta1);
  }
  if (s_out) *s_out = s;
  if (r_out) *r_out = r;
  return cost;
}

std::pair<SL2Elt, SL2Elt> random_sl2_pair(std::mt19937_64& rng, long p, int s0, int r0, int max_cost) {
  const std::vector<Rational> ts{1, -1, 2, Rational(p), Rational(1, p), Rational(-p)};
  const std::vector<Rational> bs{1, -1, Rational(1, 2), Rational(-5, 7), 2, 0, Rational(p)};
  auto word = [&] {
    SL2Elt g;
    int len = 1 + static_cast<int>(draw(rng, 3));
    for (int i = 0; i < len; ++i) {
      switch (draw(rng, 3)) {
        case 0: g = g * SL2Elt::n(bs[draw(rng, bs.size())]); break;
        case 1: g = g * SL2Elt::t(ts[draw(rng, ts.size())]); break;
        default: g = g * SL2Elt::w();
      }
    }
    return g;
  };
  for (;;) {
    SL2Elt g1 = word(), g2 = word();
    int s = 0, r = 0;
    int c2 = sl2_window_cost(g2, p, s0, r0, &s, &r);
    int c = std::max({sl2_window_cost(g1 * g2, p, s0, r0), c2, sl2_window_cost(g1, p, s, r)});
    if (c <= max_cost) return {g1, g2};
  }
}

std::vector<Rational> default_a_grid(long p) {
  std::vector<Rational> out;
  for (int v = -2; v <= 2; ++v)
    for (long u : {1L, least_nonresidue(p), -1L}) out.push_back(Rational(u) * pow_p(p, v));
  return out;
}

Command parse_command(const std::string& s) {
  if (s == "verify-transfer") return Command::VerifyTransfer;
  if (s == "verify-fl") return Command::VerifyFl;
  if (s == "verify-weil") return Command::VerifyWeil;
  if (s == "density") return Command::Density;
  if (s == "lfactor") return Command::LFactor;
  if (s == "hecke-check") return Command::HeckeCheck;
  bad("unknown command '" + s + "'");
}

std::string command_name(Command c) {
  switch (c) {
    case Command::VerifyTransfer: return "verify-transfer";
    case Command::VerifyFl: return "verify-fl";
    case Command::VerifyWeil: return "verify-weil";
    case Command::Density: return "density";
    case Command::LFactor: return "lfactor";
    case Command::HeckeCheck: return "hecke-check";
  }
  return "";
}

namespace {

int get_int(const Json& j, const char* key, int def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number_integer()) bad(std::string("'") + key + "' must be an integer");
  return j.at(key).get<int>();
}

std::vector<Rational> rational_list(const Json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be a list");
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(rational_from_json(x));
  return out;
}

SatakeData alpha_from_json(const Json& j, long p) {
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    std::complex<double> a(j[0].get<double>(), j[1].get<double>());
    if (std::abs(std::abs(a) - 1) > 1e-9) bad("alpha must have modulus 1");
    return SatakeData::numeric(p, a);
  }
  if (j.is_object() && j.contains("order")) {
    long N = j.at("order").get<long>();
    long e = j.value("exp", 0L);
    if (N < 1) bad("alpha order must be positive");
    return SatakeData::exact(p, CycNum::zeta(static_cast<std::uint64_t>(N), e));
  }
  bad("alpha must be {\"order\":N,\"exp\":k} or [re, im]");
}

}  // namespace

JobConfig parse_job_config(const Json& j) {
  if (!j.is_object()) bad("config must be an object");
  JobConfig c;
  if (j.contains("command")) c.command = parse_command(j.at("command").get<std::string>());
  if (!j.contains("quadspace")) bad("missing field 'quadspace'");
  c.space = quadspace_from_json(j.at("quadspace"));
  long p = c.space.p();
  int n = c.space.n();
  c.seed = j.value("seed", std::uint64_t{1});
  c.threads = std::max(1, get_int(j, "threads", 1));
  c.pairs = get_int(j, "pairs", 20);
  c.transform = j.value("transform", false);
  c.output = j.value("output", std::string());
  if (j.contains("caps")) {
    c.m_max = get_int(j.at("caps"), "m_max", c.m_max);
    c.n_max = get_int(j.at("caps"), "n_max", c.n_max);
  }
  if (c.m_max < 1 || c.n_max < 1) bad("caps must be positive");
  if (j.contains("metaplectic")) {
    std::string m = j.at("metaplectic").get<std::string>();
    if (m == "shimura") c.convention = MetaplecticConvention::Shimura;
    else if (m == "same-shape") c.convention = MetaplecticConvention::SameShape;
    else bad("metaplectic must be 'shimura' or 'same-shape'");
  }
  c.random.p = p;
  c.random.n = n;
  c.random.anchor = c.space;
  if (j.contains("phi")) {
    const Json& ph = j.at("phi");
    if (ph.is_string()) {
      if (ph.get<std::string>() != "basic") bad("phi must be \"basic\", a function, or {\"random\":…}");
    } else if (ph.is_object() && ph.contains("random")) {
      const Json& r = ph.at("random");
      c.phi_kind = "random";
      c.random_count = get_int(r, "count", 1);
      c.random.support_radius = get_int(r, "radius", 1);
      c.random.max_cells = std::max(1, get_int(r, "max_cells", 3));
      if (r.contains("levels")) {
        const Json& l = r.at("levels");
        if (!l.is_array() || l.size() != 2) bad("levels must be [min, max]");
        c.random.level_min = l[0].get<int>();
        c.random.level_max = l[1].get<int>();
      }
      if (c.random.level_min < -c.random.support_radius || c.random.level_min > c.random.level_max)
        bad("random levels must lie in [-radius, inf) and be ordered");
    } else {
      c.phi_kind = "explicit";
      c.phi = schwartz_from_json(ph, p);
      if (c.phi->dim() != n) bad("phi dimension differs from the space dimension");
    }
  }
  if (j.contains("grid")) {
    const Json& g = j.at("grid");
    if (g.contains("a")) c.a_grid = rational_list(g.at("a"), "grid.a");
    if (g.contains("xi")) c.xi_grid = rational_list(g.at("xi"), "grid.xi");
    if (g.contains("alpha"))
      for (const auto& a : g.at("alpha")) c.alpha_grid.push_back(alpha_from_json(a, p));
  }
  for (const auto& a : c.a_grid)
    if (a == 0) bad("grid.a contains 0");
  return c;
}

JobConfig load_job_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  Json j;
  bool toml_file = path.size() > 5 && path.substr(path.size() - 5) == ".toml";
  try {
    if (toml_file) {
      toml::table tbl = toml::parse(buf.str(), path);
      std::stringstream js;
      js << toml::json_formatter{tbl};
      j = Json::parse(js.str());
    } else {
      j = Json::parse(buf.str());
    }
  } catch (const toml::parse_error& e) {
    bad(std::string("TOML parse error: ") + e.what());
  } catch (const Json::exception& e) {
    bad(std::string("JSON parse error: ") + e.what());
  }
  return parse_job_config(j);
}

namespace {

struct CaseTask {
  std::string id;
  std::function<Json()> run;
};

Json value_pair(Json c, const CycNum& lhs, const CycNum& rhs) {
  c["lhs"] = cycnum_to_json(lhs);
  c["rhs"] = cycnum_to_json(rhs);
  c["equal"] = lhs == rhs;
  c["status"] = lhs == rhs ? "pass" : "mismatch";
  return c;
}

Json flag_case(Json c, bool ok) {
  c["equal"] = ok;
  c["status"] = ok ? "pass" : "mismatch";
  return c;
}

Json lvalue_to_json(const LFactorValue& v) {
  if (v.exact) return cycnum_to_json(*v.exact);
  return {{"float", {v.approx.real(), v.approx.imag()}}};
}

std::vector<Json> run_cases(std::vector<CaseTask>& tasks, int threads) {
  std::vector<Json> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < tasks.size();) {
      auto t0 = std::chrono::steady_clock::now();
      Json c;
      try {
        c = tasks[i].run();
      } catch (const NonStabilizing& e) {
        c = {{"status", "nonstabilized"}, {"equal", false}, {"error", e.what()}};
      } catch (const std::exception& e) {
        c = {{"status", "error"}, {"equal", false}, {"error", e.what()}};
      }
      c["id"] = tasks[i].id;
      c["ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      out[i] = std::move(c);
    }
  };
  std::vector<std::thread> pool;
  int k = std::max(1, std::min<int>(threads, static_cast<int>(tasks.size())));
  for (int i = 1; i < k; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

std::string key(std::size_t i, const std::string& label) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04zu", i);
  return std::string(buf) + ":" + label;
}

std::vector<SchwartzFn> phis_for(const JobConfig& cfg) {
  if (cfg.phi_kind == "explicit") return {*cfg.phi};
  if (cfg.phi_kind == "random") {
    std::vector<SchwartzFn> out;
    for (int i = 0; i < cfg.random_count; ++i) out.push_back(generate_random_phi(mix_seed(cfg.seed, i), cfg.random));
    return out;
  }
  return {basic_phi(cfg.space)};
}

void add_identity_cases(std::vector<CaseTask>& tasks, const JobConfig& cfg, const SchwartzFn& phi,
                        const std::string& label, const std::vector<Rational>& grid) {
  const QuadSpace& Q = cfg.space;
  for (const auto& a : grid) {
    std::string id = label + "/a=" + to_string(a);
    tasks.push_back({key(tasks.size(), id), [&cfg, &Q, phi, a] {
                       DensityResult w = whittaker_orbital(phi, a, Q, cfg.n_max);
                       CycNum x = x_transfer_value(phi, a, Q, cfg.m_max);
                       Json c = {{"a", to_string(a)}, {"levels", {{"n", w.stabilized_at}}}};
                       c = value_pair(c, w.value, x);
                       if (cfg.transform) {
                         try {
                           TransformResult t = transfer_transform(restrict_x(phi, Q), a, Q, cfg.m_max);
                           c["transform"] = cycnum_to_json(t.value);
                           c["levels"]["xi_depth"] = t.depth;
                           if (t.value != x) c = value_pair(c, w.value, t.value);
                         } catch (const Error& e) {
                           if (e.kind() != ErrorKind::SingularFiber) throw;
                           c["transform"] = "singular fiber in support";
                         }
                       }
                       return c;
                     }});
  }
}

std::vector<Rational> grid_or_default(const JobConfig& cfg) {
  return cfg.a_grid.empty() ? default_a_grid(cfg.space.p()) : cfg.a_grid;
}

void build_verify_transfer(std::vector<CaseTask>& tasks, const JobConfig& cfg, std::deque<SchwartzFn>& keep) {
  for (auto& f : phis_for(cfg)) keep.push_back(std::move(f));
  auto grid = grid_or_default(cfg);
  for (std::size_t i = 0; i < keep.size(); ++i) add_identity_cases(tasks, cfg, keep[i], "phi" + std::to_string(i), grid);
}

// Points (t, 1/t, 0, ...) of X_1 for a split first plane; Phi_0 there is 1 iff |t| = 1.
void build_verify_fl(std::vector<CaseTask>& tasks, const JobConfig& cfg) {
  const QuadSpace& Q = cfg.space;
  long p = Q.p();
  bool odd = Q.n() % 2 != 0;
  bool hyperbolic = Q.form.gram[0][0] == 0 && Q.form.gram[1][1] == 0 && Q.form.gram[0][1] == 1;
  if (hyperbolic) {
    for (int v = -2; v <= 2; ++v) {
      Rational t = pow_p(p, v) * 2;
      tasks.push_back({key(tasks.size(), "restrict/t=" + to_string(t)), [&Q, t, v] {
                         XTestFn f = restrict_x(basic_phi(Q), Q);
                         RatVec x(Q.n(), Rational(0));
                         x[0] = t;
                         x[1] = 1 / t;
                         return value_pair({{"point", to_string(t)}}, x_evaluate(f, x), CycNum(v == 0 ? 1 : 0));
                       }});
    }
  }
  tasks.push_back({key(tasks.size(), "volume"), [&Q, &cfg] {
                     DensityResult d = fiber_volume(Q, basic_phi(Q), 1, cfg.m_max);
                     Rational count = Rational(point_count_residue(Q, 1)) * pow_p(Q.p(), -(Q.n() - 1));
                     Json c = {{"levels", {{"m", d.stabilized_at}}}, {"certified", d.certified},
                               {"group_quotient", to_string(x_volume_from_groups(Q))}};
                     c = value_pair(c, d.value, count);
                     if (x_volume_from_groups(Q) != count) c = flag_case(c, false);
                     return c;
                   }});
  for (int v = -2; v <= 2; ++v) {
    Rational a = pow_p(p, v);
    tasks.push_back({key(tasks.size(), "torus/a=" + to_string(a)), [&Q, a, odd] {
                       return value_pair({{"a", to_string(a)}}, p_value(basic_phi(Q), SL2Elt::t(a), Q, odd),
                                         basic_torus_closed_form(Q, a));
                     }});
  }
  add_identity_cases(tasks, cfg, basic_phi(Q), "basic", grid_or_default(cfg));
}

SchwartzFn group_law_phi(const JobConfig& cfg) {
  RandomPhiSpec s = cfg.random;
  s.support_radius = 0;
  s.level_min = 0;
  s.level_max = 1;
  s.max_cells = 2;
  return generate_random_phi(mix_seed(cfg.seed, 0xA5A5), s);
}

void build_verify_weil(std::vector<CaseTask>& tasks, const JobConfig& cfg, std::deque<SchwartzFn>& keep) {
  const QuadSpace& Q = cfg.space;
  tasks.push_back({key(tasks.size(), "gamma-squared"), [&Q] {
                     CycNum g = weil_index(Q);
                     return value_pair({}, g * g, CycNum(disc_char(Q, -1)));
                   }});
  for (auto& f : phis_for(cfg)) keep.push_back(std::move(f));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const SchwartzFn* f = &keep[i];
    tasks.push_back({key(tasks.size(), "plancherel/phi" + std::to_string(i)), [&Q, f] {
                       return value_pair({}, integrate(abs2(*f)), integrate(abs2(fourier(*f, Q.form, kWeylKernelSign))));
                     }});
    tasks.push_back({key(tasks.size(), "fourier-twice/phi" + std::to_string(i)), [&Q, f] {
                       SchwartzFn ff = fourier(fourier(*f, Q.form, kWeylKernelSign), Q.form, kWeylKernelSign);
                       return flag_case({}, equals_ae(ff, scale_argument(*f, -1)));
                     }});
  }
  if (Q.n() % 2 != 0) return;
  SchwartzFn phi = group_law_phi(cfg);
  keep.push_back(phi);
  const SchwartzFn* f = &keep.back();
  std::mt19937_64 rng(mix_seed(cfg.seed, 0x5A5A));
  int s0 = std::max(0, -f->min_support_val()), r0 = std::max(0, f->max_level());
  for (int i = 0; i < cfg.pairs; ++i) {
    auto [g1, g2] = random_sl2_pair(rng, Q.p(), s0, r0, s0 + r0 + 1);
    tasks.push_back({key(tasks.size(), "group-law/" + std::to_string(i)), [&Q, f, g1, g2] {
                       SchwartzFn lhs = act_element(*f, g1 * g2, Q);
                       SchwartzFn rhs = act_element(act_element(*f, g2, Q), g1, Q);
                       Json c = {{"g1", sl2_to_json(g1)}, {"g2", sl2_to_json(g2)}, {"cells", lhs.size()}};
                       return flag_case(c, equals_ae(lhs, rhs));
                     }});
  }
}

void build_density(std::vector<CaseTask>& tasks, const JobConfig& cfg, std::deque<SchwartzFn>& keep) {
  const QuadSpace& Q = cfg.space;
  for (auto& f : phis_for(cfg)) keep.push_back(std::move(f));
  std::vector<Rational> grid = cfg.a_grid.empty() ? std::vector<Rational>{1} : cfg.a_grid;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const SchwartzFn* f = &keep[i];
    for (const auto& a : grid) {
      std::string base = "phi" + std::to_string(i) + "/a=" + to_string(a);
      if (cfg.xi_grid.empty()) {
        tasks.push_back({key(tasks.size(), base), [&Q, &cfg, f, a] {
                           DensityResult d = fiber_volume(Q, *f, a, cfg.m_max);
                           Json c = {{"a", to_string(a)},
                                     {"value", d.value.str()},
                                     {"stabilized_at", d.stabilized_at},
                                     {"certified", d.certified},
                                     {"lhs", cycnum_to_json(d.value)},
                                     {"levels", {{"m", d.stabilized_at}}}};
                           return flag_case(c, d.certified);
                         }});
        continue;
      }
      for (const auto& xi : cfg.xi_grid) {
        tasks.push_back({key(tasks.size(), base + "/xi=" + to_string(xi)), [&Q, &cfg, f, a, xi] {
                           DensityResult d = joint_fiber_volume(Q, *f, a, xi, cfg.m_max);
                           Json c = {{"a", to_string(a)},
                                     {"xi", to_string(xi)},
                                     {"value", d.value.str()},
                                     {"stabilized_at", d.stabilized_at},
                                     {"certified", d.certified},
                                     {"lhs", cycnum_to_json(d.value)},
                                     {"levels", {{"m", d.stabilized_at}}}};
                           return flag_case(c, d.certified);
                         }});
      }
    }
  }
}

void build_lfactor(std::vector<CaseTask>& tasks, const JobConfig& cfg, std::vector<SatakeData>& alphas) {
  const QuadSpace& Q = cfg.space;
  alphas = cfg.alpha_grid;
  if (alphas.empty())
    for (long k = 0; k < 8; ++k) alphas.push_back(SatakeData::exact(Q.p(), CycNum::zeta(8, k)));
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const SatakeData* s = &alphas[i];
    tasks.push_back({key(tasks.size(), "alpha" + std::to_string(i)), [&Q, &cfg, s] {
                       AssemblyResult r = assembly_check(Q, *s, cfg.convention);
                       Json c = {{"alpha", {s->alpha.real(), s->alpha.imag()}},
                                 {"lhs", lvalue_to_json(r.lhs)},
                                 {"rhs", lvalue_to_json(r.rhs)},
                                 {"residual", r.residual}};
                       if (r.exact_equal) c["exact_equal"] = *r.exact_equal;
                       return flag_case(c, r.pass);
                     }});
  }
}

void build_hecke(std::vector<CaseTask>& tasks, const JobConfig& cfg, std::deque<SchwartzFn>& keep) {
  const QuadSpace& Q = cfg.space;
  SchwartzFn input = cfg.phi_kind == "explicit" ? *cfg.phi : basic_phi(Q);
  HeckeResult h = hecke_translate(input, Q);
  keep.push_back(h.value);
  long p = Q.p();
  Json cosets = {{"count", h.cosets.reps.size()}, {"expected", p * p + p}, {"scanned", h.cosets.scanned},
                 {"inequivalent", h.cosets.inequivalent}};
  tasks.push_back({key(tasks.size(), "cosets"),
                   [cosets, ok = h.cosets.count_ok && h.cosets.inequivalent] { return flag_case(cosets, ok); }});
  tasks.push_back({key(tasks.size(), "k-invariant"), [h] {
                     return flag_case({{"input_k_invariant", h.input_k_invariant}, {"cells", h.value.size()}},
                                      !h.input_k_invariant || h.k_invariant);
                   }});
  add_identity_cases(tasks, cfg, keep[0], "hecke", grid_or_default(cfg));
}

}  // namespace

Report run_job(const JobConfig& cfg) {
  std::vector<CaseTask> tasks;
  std::deque<SchwartzFn> keep;  // cases hold pointers into it
  std::vector<SatakeData> alphas;
  switch (cfg.command) {
    case Command::VerifyTransfer: build_verify_transfer(tasks, cfg, keep); break;
    case Command::VerifyFl: build_verify_fl(tasks, cfg); break;
    case Command::VerifyWeil: build_verify_weil(tasks, cfg, keep); break;
    case Command::Density: build_density(tasks, cfg, keep); break;
    case Command::LFactor: build_lfactor(tasks, cfg, alphas); break;
    case Command::HeckeCheck: build_hecke(tasks, cfg, keep); break;
  }
  std::vector<Json> cases = run_cases(tasks, cfg.threads);
  Report rep;
  bool mismatch = false, nonstab = false;
  for (const auto& c : cases) {
    std::string st = c.at("status");
    if (st == "nonstabilized") nonstab = true;
    else if (st != "pass") mismatch = true;
  }
  rep.exit_code = mismatch ? kMismatch : nonstab ? kNonStabilized : kPass;
  rep.json = {{"suite", command_name(cfg.command)},
              {"quadspace", quadspace_to_json(cfg.space)},
              {"seed", cfg.seed},
              {"cases", cases},
              {"pass", rep.exit_code == kPass}};
  return rep;
}

}  // namespace ttl
