#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oremul/bench.hpp"
#include "oremul/json_io.hpp"
#include "support.hpp"

using namespace oremul;
using testing_support::op;

TEST(RandomOp, Deterministic) {
  const auto& f = testing_support::gf65521();
  EXPECT_EQ(random_op(5, 3, VarTag::partial, f, 42), random_op(5, 3, VarTag::partial, f, 42));
  EXPECT_FALSE(random_op(5, 3, VarTag::partial, f, 42) == random_op(5, 3, VarTag::partial, f, 43));
  RationalField q;
  EXPECT_EQ(random_op(4, 4, VarTag::theta, q, 7), random_op(4, 4, VarTag::theta, q, 7));
}

TEST(RandomOp, ExactBidegree) {
  PrimeField f(2);
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto p = random_op(5, 3, VarTag::partial, f, s);
    ASSERT_EQ(p.bidegree(), (Bidegree{5, 3}));
  }
  EXPECT_EQ(random_op(0, 0, VarTag::theta, f, 1).bidegree(), (Bidegree{0, 0}));
}

TEST(RandomOp, RationalCoefficientsAre16Bit) {
  RationalField q;
  auto p = random_op(6, 6, VarTag::partial, q, 3);
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) {
      const auto& c = p.at(i, j);
      ASSERT_EQ(c.get_den(), 1);
      ASSERT_LE(abs(c.get_num()), 32768);
    }
}

TEST(RandomOp, UniformOverGF5) {
  // 10^4 draws; every residue count within 5 sigma of N/5, plus a chi-square
  // bound far beyond the 4-degree-of-freedom tail.
  PrimeField f(5);
  std::mt19937_64 rng(2024);
  std::vector<double> count(5, 0);
  std::size_t total = 0;
  while (total < 10000) {
    auto p = random_op(9, 9, VarTag::partial, f, rng);
    for (std::size_t i = 0; i < 10 && total < 10000; ++i)
      for (std::size_t j = 0; j < 10 && total < 10000; ++j) {
        if (i == 9 && j == 9) continue;  // forced nonzero
        ++count[p.at(i, j)];
        ++total;
      }
  }
  const double expect = total / 5.0, sigma = std::sqrt(total * 0.2 * 0.8);
  double chi2 = 0;
  for (double c : count) {
    EXPECT_LT(std::abs(c - expect), 5 * sigma);
    chi2 += (c - expect) * (c - expect) / expect;
  }
  EXPECT_LT(chi2, 30.0);
}

TEST(BenchConfig, Errors) {
  BenchConfig cfg;
  cfg.algos = {"naive"};
  EXPECT_THROW(run(cfg), InvalidConfig);
  cfg.sizes = {4};
  cfg.trials = 0;
  EXPECT_THROW(run(cfg), InvalidConfig);
  cfg.trials = 1;
  cfg.sizes = {0};
  EXPECT_THROW(run(cfg), InvalidConfig);
  cfg.sizes = {4};
  cfg.algos = {"naive", "bogus"};
  EXPECT_THROW(run(cfg), UnknownAlgorithm);
  cfg.algos = {};
  EXPECT_THROW(run(cfg), InvalidConfig);
  EXPECT_THROW(parse_format("xml"), InvalidConfig);
}

TEST(Bench, VerifyPasses) {
  BenchConfig cfg;
  cfg.algos = {"mulweyl", "naive"};
  cfg.sizes = {8};
  cfg.verify = true;
  auto recs = run(cfg);
  ASSERT_EQ(recs.size(), 2u);
  for (const auto& r : recs) {
    EXPECT_EQ(r.status, RunStatus::ok);
    ASSERT_TRUE(r.verified.has_value());
    EXPECT_TRUE(*r.verified) << r.algo;
  }
  EXPECT_TRUE(all_passed(recs));
}

TEST(Bench, AllAlgorithmsVerify) {
  for (std::uint64_t p : {0u, 3u, 65521u}) {
    BenchConfig cfg;
    cfg.algos = algorithm_names();
    cfg.sizes = {3, 5};
    cfg.trials = 2;
    cfg.p = p;
    cfg.verify = true;
    auto recs = run(cfg);
    EXPECT_EQ(recs.size(), cfg.algos.size() * 4);
    EXPECT_TRUE(all_passed(recs)) << p;
    for (const auto& r : recs) {
      if (r.status == RunStatus::ok) {
        EXPECT_TRUE(r.verified.has_value());
      }
    }
  }
}

TEST(Bench, SkipsOnCharacteristic) {
  BenchConfig cfg;
  cfg.algos = {"mulweyl", "charp-theta"};
  cfg.sizes = {4};
  cfg.p = 3;
  cfg.verify = true;
  auto recs = run(cfg);
  EXPECT_EQ(recs[0].status, RunStatus::skipped);
  EXPECT_FALSE(recs[0].verified.has_value());
  EXPECT_EQ(recs[1].status, RunStatus::ok);
  cfg.p = 0;
  EXPECT_EQ(run(cfg)[1].status, RunStatus::skipped);
}

TEST(Bench, CountBlocks) {
  BenchConfig cfg;
  cfg.algos = {"mulweyl"};
  cfg.sizes = {32};
  cfg.count_blocks = true;
  auto recs = run(cfg);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].blocks.total(), 12u);
  EXPECT_NE(render_csv(recs).find(",12,"), std::string::npos);
}

TEST(Bench, CsvDeterministicApartFromTime) {
  BenchConfig cfg;
  cfg.algos = {"ivdh-theta", "takayama", "charp"};
  cfg.sizes = {4, 6};
  cfg.trials = 2;
  cfg.seed = 99;
  cfg.verify = true;
  cfg.count_blocks = true;
  const auto a = render_csv(run(cfg), false), b = render_csv(run(cfg), false);
  EXPECT_EQ(a, b);
  cfg.seed = 100;
  EXPECT_NE(a, render_csv(run(cfg), false));
}

TEST(Bench, FaultInjectionFails) {
  for (const auto& algo : algorithm_names()) {
    BenchConfig cfg;
    cfg.algos = {algo};
    cfg.sizes = {3};
    cfg.p = 65521;
    cfg.verify = true;
    cfg.fault_injection = true;
    auto recs = run(cfg);
    ASSERT_TRUE(recs[0].verified.has_value()) << algo;
    EXPECT_FALSE(*recs[0].verified) << algo;
    EXPECT_FALSE(all_passed(recs));
  }
}

TEST(Bench, TableRendering) {
  BenchConfig cfg;
  cfg.algos = {"naive", "mulweyl"};
  cfg.sizes = {2};
  cfg.p = 3;
  auto text = render_table(run(cfg));
  EXPECT_NE(text.find("mulweyl"), std::string::npos);
  EXPECT_NE(text.find("skipped"), std::string::npos);
}

TEST(JsonIo, RoundTripPrimeField) {
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(120);
  for (int t = 0; t < 30; ++t) {
    auto p = testing_support::random_op_upto(6, 6, t % 2 ? VarTag::theta : VarTag::partial, f, rng);
    auto j = json::parse(to_json(p).dump());
    ASSERT_EQ(op_from_json(j, f), p);
  }
}

TEST(JsonIo, RationalStrings) {
  RationalField q;
  auto p = OrePoly<RationalField>::from_rows(q, VarTag::partial, {{q.parse("-3/4"), q.one()}});
  auto j = to_json(p);
  EXPECT_EQ(j["coeffs"][0][0], "-3/4");
  EXPECT_EQ(j["coeffs"][0][1], "1/1");
  EXPECT_EQ(j["p"], 0);
  EXPECT_EQ(op_from_json(j, q), p);
  auto k = json::parse(R"({"var":"theta","p":0,"coeffs":[[2,"1/2"]]})");
  EXPECT_EQ(op_from_json(k, q).coeff(0, 1), q.parse("1/2"));
}

TEST(JsonIo, Errors) {
  const auto& f = testing_support::gf65521();
  EXPECT_THROW(op_from_json(json::parse(R"({"var":"theta","p":65521,"coeffs":[[70000]]})"), f), FormatError);
  EXPECT_THROW(op_from_json(json::parse(R"({"var":"theta","p":65521,"coeffs":[[-1]]})"), f), FormatError);
  EXPECT_THROW(op_from_json(json::parse(R"({"var":"eta","p":65521,"coeffs":[[1]]})"), f), FormatError);
  EXPECT_THROW(op_from_json(json::parse(R"({"var":"theta","p":7,"coeffs":[[1]]})"), f), DomainMismatch);
  EXPECT_THROW(op_from_json(json::parse(R"({"var":"theta","p":65521})"), f), FormatError);
  EXPECT_THROW(op_from_json(json::parse(R"({"var":"theta","p":65521,"coeffs":[1]})"), f), FormatError);
}

TEST(JsonIo, ConvertRoundTrip) {
  const auto& f = testing_support::gf65521();
  std::mt19937_64 rng(121);
  for (int t = 0; t < 30; ++t) {
    auto p = testing_support::random_op_upto(6, 6, VarTag::partial, f, rng);
    auto th = convert_json(to_json(p), f, VarTag::theta);
    EXPECT_EQ(th["var"], "theta");
    EXPECT_EQ(laurent_from_json(th, f), partial_to_theta(p));
    ASSERT_EQ(op_from_json(convert_json(th, f, VarTag::partial), f), p);
  }
  // d = X^{-1} theta
  RationalField q;
  auto d = convert_json(to_json(op(q, VarTag::partial, {{0, 1}})), q, VarTag::theta);
  EXPECT_EQ(d["valuation"], 1);
  EXPECT_EQ(d["coeffs"], json::parse(R"([["0/1","1/1"]])"));
  auto bad = json::parse(R"({"var":"theta","p":0,"coeffs":[["1/1"]],"valuation":1})");
  EXPECT_THROW(convert_json(bad, q, VarTag::partial), InvalidDomain);
}
