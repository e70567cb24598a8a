// One PASS/FAIL line per acceptance criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "ttl/error.hpp"
#include "ttl/hecke.hpp"
#include "ttl/job.hpp"
#include "ttl/lfactor.hpp"
#include "ttl/padic.hpp"
#include "ttl/transfer.hpp"

using namespace ttl;

namespace {

int threads() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Tally {
  long cases = 0, failed = 0;
  std::ostringstream notes;

  void add(const Report& r) {
    for (const auto& c : r.json["cases"]) {
      ++cases;
      if (c["status"] != "pass") {
        if (++failed <= 5) notes << " [" << r.json["suite"].get<std::string>() << " " << c["id"].get<std::string>()
                                 << ": " << c.value("error", std::string("mismatch")) << "]";
      }
    }
  }
  void check(bool ok, const std::string& what) {
    ++cases;
    if (!ok && ++failed <= 5) notes << " [" << what << "]";
  }
};

Json space_json(long p, int planes, std::vector<long> diag) {
  return {{"p", p}, {"planes", planes}, {"diag", diag}};
}

Report run(const Json& j) { return run_job(parse_job_config(j)); }

bool report(const char* ac, const char* title, const std::function<void(Tally&, std::ostringstream&)>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Tally t;
  std::ostringstream info;
  try {
    body(t, info);
  } catch (const std::exception& e) {
    t.failed++;
    t.notes << " [exception: " << e.what() << "]";
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = t.failed == 0 && t.cases > 0;
  std::printf("%s %s: %s (%ld checks, %ld failed, %.1fs)%s%s\n", ac, ok ? "PASS" : "FAIL", title, t.cases, t.failed, s,
              info.str().c_str(), t.notes.str().c_str());
  std::fflush(stdout);
  return ok;
}

struct CatalogEntry {
  int planes;
  std::vector<long> diag;
};

// dims 3..6, split and non-split discriminants
const std::vector<CatalogEntry> kCatalog{{1, {1}}, {1, {-1}}, {2, {}}, {1, {1, -2}}, {2, {1}}, {2, {-1}}, {3, {}}, {2, {1, -2}}};

}  // namespace

int main() {
  bool all = true;

  all &= report("AC1", "transfer identity, dims 3/4/5, p in {3,5,7}, 50 random functions x a-grid", [](Tally& t,
                                                                                                        auto& info) {
    long nonzero = 0;
    for (long p : {3L, 5L, 7L}) {
      for (const auto& [planes, diag] : std::vector<CatalogEntry>{{1, {1}}, {2, {}}, {2, {1}}}) {
        Report r = run({{"command", "verify-transfer"},
                        {"quadspace", space_json(p, planes, diag)},
                        {"phi", {{"random", {{"count", 50}, {"radius", 1}, {"levels", {0, 1}}}}}},
                        {"seed", 1000 + p},
                        {"threads", threads()}});
        t.add(r);
        for (const auto& c : r.json["cases"])
          if (c.contains("lhs") && !c["lhs"]["terms"].empty()) ++nonzero;
      }
    }
    info << " nonzero values: " << nonzero;
  });

  all &= report("AC2", "fundamental lemma at the basic function", [](Tally& t, auto&) {
    for (long p : {3L, 5L}) {
      for (const auto& [planes, diag] : std::vector<CatalogEntry>{{1, {1}}, {2, {}}, {1, {1, -2}}, {2, {1}}}) {
        Json q = space_json(p, planes, diag);
        t.add(run({{"command", "verify-fl"}, {"quadspace", q}, {"threads", threads()}}));
        QuadSpace Q = quadspace_from_json(q);
        XTestFn f = restrict_x(basic_phi(Q), Q);
        t.check(f.meets.size() == 1 && f.meets[0].second == Meets::Yes, "restrict_x(Phi_0) meets X_1");
        t.check(x_equal(f, restrict_x(refine(basic_phi(Q), 1), Q), Q), "restriction is representation independent");
      }
    }
  });

  all &= report("AC3", "volume of X(O) from point counts and group orders", [](Tally& t, auto& info) {
    for (long p : {3L, 5L, 7L}) {
      for (const auto& [planes, diag] : kCatalog) {
        QuadSpace Q = split_plus_diagonal(planes, diag, p);
        if (Q.n() % 2 == 0 && val_p(Q.disc, p) != 0) continue;
        Rational count = Rational(point_count_residue(Q, 1)) * pow_p(p, -(Q.n() - 1));
        DensityResult d = fiber_volume(Q, basic_phi(Q), 1);
        t.check(d.certified && d.value == CycNum(count), "fiber_volume " + Q.witt_hint);
        t.check(x_volume_from_groups(Q) == count, "group quotient " + Q.witt_hint);
      }
    }
    QuadSpace Q = split_plus_diagonal(2, {}, 3);
    Rational v = fiber_volume(Q, basic_phi(Q), 1).value.rational_value();
    t.check(v == Rational(8, 9), "split dim 4 at p=3 is 8/9");
    t.check(Rational(orth_group_order(OrthKind::EvenPlus, 2, 3)) / Rational(orth_group_order(OrthKind::Odd, 1, 3)) /
                    27 ==
                v,
            "1152/48 route");
    info << " split dim-4 p=3 volume " << to_string(v);
  });

  all &= report("AC4", "Weil representation: group law, Fourier, Plancherel, Weil index", [](Tally& t, auto&) {
    for (const auto& [planes, diag] : std::vector<CatalogEntry>{{2, {}}, {1, {1, -2}}}) {
      t.add(run({{"command", "verify-weil"},
                 {"quadspace", space_json(3, planes, diag)},
                 {"phi", {{"random", {{"count", 5}, {"radius", 1}, {"levels", {0, 1}}}}}},
                 {"pairs", 100},
                 {"seed", 4},
                 {"threads", threads()}}));
    }
    for (long p : {3L, 5L, 7L})
      for (const auto& [planes, diag] : kCatalog) {
        QuadSpace Q = split_plus_diagonal(planes, diag, p);
        CycNum g = weil_index(Q);
        t.check(g * g == CycNum(disc_char(Q, -1)), "gamma^2 " + Q.witt_hint);
      }
  });

  all &= report("AC5", "Hecke translate: coset certificate, K-invariance, transfer identity", [](Tally& t, auto&) {
    for (long p : {3L, 5L}) {
      Json j = {{"command", "hecke-check"}, {"quadspace", space_json(p, 2, {})}, {"threads", threads()}};
      Report r = run(j);
      t.add(r);
      t.check(r.json["cases"][0]["count"] == p * p + p, "coset count");
    }
  });

  all &= report("AC6", "L-factors: dim-4 identity, assembly grid, dim-3 display", [](Tally& t, auto&) {
    QuadSpace Q4 = split_plus_diagonal(2, {}, 3);
    for (int k = 0; k < 20; ++k)
      t.check(lx_sharp(Q4, SatakeData::exact(3, CycNum::zeta(20, k))).exact == CycNum(1), "lx_sharp dim 4");
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> U(0, 6.283185307179586);
    for (long p : {3L, 5L}) {
      for (const auto& [planes, diag] : kCatalog) {
        QuadSpace Q = split_plus_diagonal(planes, diag, p);
        if (Q.n() % 2 == 0 && val_p(Q.disc, p) != 0) continue;
        for (int i = 0; i < 50; ++i) {
          AssemblyResult r = assembly_check(Q, SatakeData::numeric(p, std::polar(1.0, U(rng))));
          t.check(r.pass && r.residual < 1e-12, "assembly float " + Q.witt_hint);
        }
        for (int k = 0; k < 8; ++k) {
          AssemblyResult r = assembly_check(Q, SatakeData::exact(p, CycNum::zeta(8, k)));
          t.check(r.pass && r.exact_equal.value_or(false), "assembly exact " + Q.witt_hint);
        }
      }
    }
    QuadSpace Q3 = split_plus_diagonal(1, {1}, 3);
    for (int k = 0; k < 12; ++k) {
      SatakeData s = SatakeData::exact(3, CycNum::zeta(12, k));
      LFactorValue half = mp_std_lfactor(s, Rational(1, 2), 1);
      LFactorValue z1 = zeta_factor(3, 1);
      LFactorValue display = half * half / adjoint_lfactor(s, 1) * zeta_factor(3, 2) / (z1 * z1);
      t.check(display.exact && lx_sharp(Q3, s).exact == display.exact, "dim-3 display");
    }
  });

  all &= report("AC7", "decay |f(t(a))| <= C|a|^{n/2} down to |a| = p^-6 (spectral statements not desk-verifiable)",
                [](Tally& t, auto&) {
                  for (long p : {3L, 5L, 7L}) {
                    for (const auto& [planes, diag] : std::vector<CatalogEntry>{{1, {1}}, {2, {}}, {2, {1}}}) {
                      QuadSpace Q = split_plus_diagonal(planes, diag, p);
                      RandomPhiSpec spec;
                      spec.p = p;
                      spec.n = Q.n();
                      spec.anchor = Q;
                      for (std::uint64_t seed = 0; seed < 10; ++seed) {
                        SchwartzFn phi = generate_random_phi(seed, spec);
                        double cmax = 0;
                        for (const auto& [c, v] : phi.cells()) cmax = std::max(cmax, std::abs(v.to_float()));
                        int s = std::max(0, -phi.min_support_val());
                        double C = cmax * std::pow(static_cast<double>(p), Q.n() * s / 2.0);
                        for (int k = 1; k <= 6; ++k) {
                          Rational a = pow_p(p, k);  // |a| = p^-k
                          double f = std::abs(p_value(phi, SL2Elt::t(a), Q, true).to_float());
                          double bound = C * std::pow(static_cast<double>(p), -k * Q.n() / 2.0);
                          t.check(f <= bound * (1 + 1e-12), "decay " + Q.witt_hint);
                        }
                      }
                    }
                  }
                });

  return all ? 0 : 1;
}
