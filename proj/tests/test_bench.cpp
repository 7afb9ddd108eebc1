#include <doctest.h>

#include <numbers>
#include <sstream>

#include "qent/bench.hpp"
#include "qent/witness_config.hpp"

using namespace qent;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("grid parsing") {
  const GridSpec g = parse_grid("0:1:5");
  CHECK(g.values() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(parse_grid("0.5:0.5:1").values() == std::vector<double>{0.5});
  CHECK_THROWS_AS(parse_grid("0:1"), Error);
  CHECK_THROWS_AS(parse_grid("a:1:3"), Error);
  CHECK_THROWS_AS(parse_grid("0:1:3x"), Error);
  CHECK(parse_experiment("kerr") == Experiment::kerr);
  CHECK(std::string(experiment_name(Experiment::scaling)) == "scaling");
  CHECK_THROWS_AS(parse_experiment("nope"), Error);
}

TEST_CASE("configuration validation") {
  SweepConfig c = default_config(Experiment::werner);
  c.grids["p"] = {1.0, 0.0, 5};
  CHECK_THROWS_AS(validate(c), Error);
  c.grids["p"] = {0.0, 1.0, 0};
  CHECK_THROWS_AS(validate(c), Error);
  c = default_config(Experiment::werner);
  c.grids["q"] = {0.0, 1.0, 3};
  CHECK_THROWS_AS(validate(c), Error);
  c = default_config(Experiment::kerr);
  CHECK_THROWS_AS(validate(c), Error);
  c.alpha = 3.0;
  c.beta = 3.0;
  CHECK_NOTHROW(validate(c));
  c.threads = 0;
  CHECK_THROWS_AS(validate(c), Error);
  c = default_config(Experiment::region);
  c.tail_tolerance = 0.0;
  CHECK_THROWS_AS(validate(c), Error);
}

TEST_CASE("werner study thresholds") {
  const WernerStudy w2 = run_werner_study(2, parse_grid("0:1:101").values());
  CHECK(w2.records.size() == 101);
  CHECK(std::abs(w2.thresholds.tw - 0.6) < 1e-9);
  CHECK(std::abs(w2.thresholds.ppt - 1.0 / 3.0) < 1e-6);
  CHECK_FALSE(w2.thresholds.hz.has_value());

  const WernerStudy w1 = run_werner_study(1, parse_grid("0:1:101").values());
  CHECK(std::abs(w1.thresholds.tw - 0.6) < 1e-9);
  REQUIRE(w1.thresholds.hz.has_value());
  CHECK(std::abs(*w1.thresholds.hz - (std::sqrt(5.0) - 1.0) / 2.0) < 1e-9);
  for (const WernerRecord& r : w1.records) {
    CHECK(r.verdict_tw == (r.p > 0.6 + 1e-9));
    CHECK(r.tw_value == doctest::Approx(0.25 - (5 * r.p * r.p + 2 * r.p + 1) / 16).epsilon(1e-12));
  }
}

TEST_CASE("werner CSV contract") {
  const SweepOutput out = run_sweep(default_config(Experiment::werner));
  const auto rows = lines(out.csv);
  REQUIRE(rows.size() == 102);
  CHECK(rows[0] == "p,tw_value,hz1,hz2,negativity,verdict_tw,verdict_hz");
  CHECK(rows[1].rfind("0.000000000000e+00,", 0) == 0);
  CHECK(out.summary.find("tw_threshold=") != std::string::npos);
}

TEST_CASE("bell study") {
  const std::vector<BellRecord> b = run_bell_study();
  REQUIRE(b.size() == 2);
  CHECK(b[1].tw_minus_minus == doctest::Approx(-0.25));
  CHECK(b[0].phase_value == doctest::Approx(-0.5));
  CHECK(b[0].hz2 == doctest::Approx(0.25));
  CHECK(b[1].negativity == doctest::Approx(0.5));
  CHECK(lines(to_csv(b)).size() == 3);
}

TEST_CASE("region sweep is independent of thread count") {
  SweepConfig c = default_config(Experiment::region);
  c.grids["p"] = parse_grid("0:1:4");
  c.grids["r"] = parse_grid("0.1:1.2:3");
  c.cutoff = 15;
  const std::string one = run_sweep(c).csv;
  c.threads = 3;
  const std::string three = run_sweep(c).csv;
  CHECK(one == three);

  const std::vector<RegionRecord> recs = run_region_sweep(c);
  REQUIRE(recs.size() == 12);
  CHECK(recs[1].p == doctest::Approx(1.0 / 3.0));
  CHECK(recs[4].r == doctest::Approx(0.65));
  for (const RegionRecord& r : recs) {
    CHECK(r.cutoff == 15);
    CHECK(r.discarded_weight < c.tail_tolerance);
    if (r.p == 0.0) {
      CHECK_FALSE(r.verdict_tw);
      CHECK_FALSE(r.verdict_hz);
      CHECK(r.negativity <= 1e-9);
    }
    if (r.p == 1.0 && r.r < 1.0) {
      const double lam2 = std::tanh(r.r) * std::tanh(r.r);
      CHECK(r.tw_value == doctest::Approx(-lam2 / ((1 - lam2) * (1 - lam2))).epsilon(1e-3));
    }
  }
}

TEST_CASE("kerr sweep endpoints") {
  SweepConfig c = default_config(Experiment::kerr);
  c.alpha = 3.0;
  c.beta = 3.0;
  c.grids["t"] = {0.0, 2.0 * std::numbers::pi, 5};
  const std::vector<KerrRecord> k = run_kerr_time_sweep(c);
  REQUIRE(k.size() == 5);
  CHECK(std::abs(k[0].tw_value) <= 1e-8 * k[0].tw_scale);
  CHECK(std::abs(k[4].tw_value) <= 1e-8 * k[4].tw_scale);
  CHECK(k[0].dgcz_margin == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(k[0].entropy < 1e-9);
  CHECK(k[4].entropy < 1e-9);
  CHECK(k[2].entropy > 0.1);
  CHECK(k[1].verdict_tw);
  CHECK(lines(to_csv(k))[0] ==
        "t,tw_value,theta,tw_scale,dgcz_margin,dgcz_lhs,tau,tau_prime,entropy,verdict_tw,verdict_dgcz,cutoff_a,"
        "cutoff_b,discarded_weight");
}

TEST_CASE("log-log slope") {
  CHECK(log_log_slope({1, 2, 4}, {8, 2, 0.5}) == doctest::Approx(-2.0));
  CHECK_THROWS_AS(log_log_slope({1}, {1}), Error);
}

TEST_CASE("witness configuration files") {
  const WitnessConfig c = parse_witness_config(
      "# Bell state, product form\n"
      "state = bell2\n"
      "op_a1 = sigma_minus   # trailing comment\n"
      "op_b1 = sigma_minus\n"
      "sigma_a1 = 1\nsigma_a2 = 1\nsigma_b1 = 0\nsigma_b2 = 0\n"
      "phase = 0\n");
  const WitnessJobResult r = run_witness_config(c);
  CHECK(r.result.value == doctest::Approx(-0.5));
  const auto rows = lines(to_csv(r));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].rfind("state,variant,s_term,trace_re,trace_im,phi,value,entangled", 0) == 0);
  CHECK(rows[1].rfind("bell2,product,", 0) == 0);

  const WitnessJobResult j = run_witness_config(parse_witness_config(
      "state = bell1\nvariant = joint\nop_a1 = sigma_minus\nop_b1 = sigma_minus\n"
      "sigma_a1 = 1\nsigma_a2 = 0\nsigma_b1 = 0\nsigma_b2 = 1\n"));
  CHECK(j.result.value == doctest::Approx(-0.5));

  const WitnessJobResult t = run_witness_config(parse_witness_config(
      "state = cross_kerr\nalpha = 1\nbeta = 1\nt = 0.5\nop_a1 = quadrature:0.3\nop_b1 = a\nvariant = product\n"));
  CHECK(t.truncation.cutoff_a > 0);

  CHECK_THROWS_AS(parse_witness_config("colour = blue\n"), Error);
  CHECK_THROWS_AS(parse_witness_config("state bell1\n"), Error);
  CHECK_THROWS_AS(parse_witness_config("state = bell1\nstate = bell2\n"), Error);
  CHECK_THROWS_AS(run_witness_config(parse_witness_config("state = moon\n")), Error);
  CHECK_THROWS_AS(run_witness_config(parse_witness_config("state = werner1\n")), Error);
  CHECK_THROWS_AS(run_witness_config(parse_witness_config("state = bell1\nop_a1 = b\n")), Error);
  CHECK_THROWS_AS(run_witness_config(parse_witness_config("state = bell1\nsigma_a1 = 2\n")), Error);
  CHECK_THROWS_AS(run_witness_config(parse_witness_config("state = tmsv\nr = 0.5\nop_a1 = sigma_minus\n")), Error);
  CHECK_THROWS_AS(load_witness_config("/nonexistent/witness.cfg"), Error);
}
