#include <doctest.h>

#include "ttl/error.hpp"
#include "ttl/job.hpp"

using namespace ttl;

namespace {

Json strip_timing(Json j) {
  for (auto& c : j["cases"]) c.erase("ms");
  return j;
}

}  // namespace

TEST_SUITE("job") {
  TEST_CASE("random functions") {
    RandomPhiSpec s;
    s.p = 5;
    s.n = 3;
    SchwartzFn a = generate_random_phi(42, s), b = generate_random_phi(42, s);
    CHECK(a == b);
    CHECK(!a.empty());
    std::vector<Cell> cells;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      SchwartzFn f = generate_random_phi(seed, s);
      CHECK(f.min_support_val() >= -1);
      for (const auto& [c, v] : f.cells()) {
        CHECK(val_p(c.center, 5) >= -1);
        CHECK(c.level >= -1);
        cells.push_back(c);
      }
      std::vector<Cell> mine;
      for (const auto& [c, v] : f.cells()) mine.push_back(c);
      CHECK(pieces_disjoint(mine, 5));
    }
  }

  TEST_CASE("json round trips") {
    CycNum x = CycNum::zeta(9, 2) * CycNum(Rational(-7, 3)) + CycNum::sqrt_p(3, Rational(1, 2)) * CycNum::zeta(4, 1);
    CHECK(cycnum_from_json(cycnum_to_json(x)) == x);
    RandomPhiSpec s;
    SchwartzFn f = generate_random_phi(3, s);
    CHECK(schwartz_from_json(schwartz_to_json(f), 3) == f);
    QuadSpace Q = split_plus_diagonal(1, {1, -2}, 3);
    QuadSpace R = quadspace_from_json(quadspace_to_json(Q));
    CHECK(R.form.gram == Q.form.gram);
    CHECK(R.v1 == Q.v1);
    SL2Elt g = SL2Elt::make(Rational(1, 3), 2, Rational(-1, 2), 0);
    CHECK(sl2_from_json(sl2_to_json(g)) == g);
    Json j = cycnum_to_json(CycNum(Rational(8, 9)));
    CHECK(j["terms"][0]["num"] == 8);
    CHECK(j["terms"][0]["den"] == 9);
  }

  TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_job_config(Json::parse(R"({"command":"density"})")), Error);
    CHECK_THROWS_AS(parse_job_config(Json::parse(R"({"command":"nope","quadspace":{"p":3,"planes":2}})")), Error);
    CHECK_THROWS_AS(
        parse_job_config(Json::parse(R"({"quadspace":{"p":3,"gram":[[0,1,0],[1,0]],"v1":[1,1,0]}})")), Error);
    CHECK_THROWS_AS(parse_job_config(Json::parse(R"({"quadspace":{"p":2,"planes":2}})")), Error);
    CHECK_THROWS_AS(parse_job_config(Json::parse(R"({"quadspace":{"p":3,"planes":2},"grid":{"a":["0"]}})")), Error);
    try {
      parse_job_config(Json::parse(R"({"quadspace":{"p":9,"planes":2}})"));
      FAIL("expected a config error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ConfigError);
    }
  }

  TEST_CASE("density report") {
    JobConfig c = parse_job_config(
        Json::parse(R"({"command":"density","quadspace":{"p":3,"planes":2},"phi":"basic","grid":{"a":["1"]}})"));
    Report r = run_job(c);
    CHECK(r.exit_code == kPass);
    const Json& cs = r.json["cases"][0];
    CHECK(cs["value"] == "8/9");
    CHECK(cs["stabilized_at"] == 1);
    CHECK(cs["certified"] == true);
  }

  TEST_CASE("verify-fl report") {
    JobConfig c = parse_job_config(Json::parse(R"({"command":"verify-fl","quadspace":{"p":3,"planes":2}})"));
    Report r = run_job(c);
    CHECK(r.exit_code == kPass);
    CHECK(r.json["pass"] == true);
    bool saw = false;
    for (const auto& cs : r.json["cases"])
      if (cs["id"].get<std::string>().find("basic/a=1") != std::string::npos && cs["a"] == "1") {
        CHECK(cs["lhs"] == cs["rhs"]);
        CHECK(cycnum_from_json(cs["lhs"]) == CycNum(Rational(8, 9)));
        saw = true;
      }
    CHECK(saw);
  }

  TEST_CASE("reports are deterministic and thread-independent") {
    Json cfg = Json::parse(R"({"command":"verify-transfer","quadspace":{"p":5,"planes":1,"diag":[1]},
                             "phi":{"random":{"count":3}},"seed":17,"grid":{"a":["1","5","1/5","2"]}})");
    JobConfig c1 = parse_job_config(cfg);
    cfg["threads"] = 3;
    JobConfig c3 = parse_job_config(cfg);
    Json a = strip_timing(run_job(c1).json), b = strip_timing(run_job(c1).json), c = strip_timing(run_job(c3).json);
    CHECK(a.dump() == b.dump());
    CHECK(a.dump() == c.dump());
    CHECK(a["pass"] == true);
  }

  TEST_CASE("non-stabilized exit code") {
    JobConfig c = parse_job_config(Json::parse(
        R"({"command":"verify-transfer","quadspace":{"p":3,"planes":2},"grid":{"a":["1"]},"caps":{"n_max":1},
             "phi":{"n":4,"cells":[{"center":["1","1","0","0"],"level":1,"coeff":"1"}]}})"));
    Report r = run_job(c);
    CHECK(r.exit_code == kNonStabilized);
  }

  TEST_CASE("toml configs") {
    JobConfig c = load_job_config(std::string(TTL_CONFIG_DIR) + "/verify_transfer_random.toml");
    CHECK(c.command == Command::VerifyTransfer);
    CHECK(c.random_count == 5);
    CHECK(c.space.n() == 4);
  }
}
