#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pplab/cli.hpp"

using namespace pplab;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("pplab_cli_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Parse, RoundTrip) {
  auto cfg = parse_config({"exponents", "--k", "12", "--theta", "5"});
  EXPECT_EQ(cfg.subcommand, Subcommand::Exponents);
  EXPECT_EQ(cfg.integer("k"), 12);
  EXPECT_EQ(cfg.rational("theta"), Rational(5));
  EXPECT_EQ(cfg.seed, 0x5EEDu);
}

TEST(Parse, ExactRational) {
  auto cfg = parse_config({"exponents", "--k=12", "--theta=9/2"});
  EXPECT_EQ(cfg.rational("theta"), Rational(9, 2));
}

TEST(Parse, Errors) {
  auto code = [](std::vector<std::string> a) {
    try {
      parse_config(a);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  EXPECT_EQ(code({"exponents", "--k", "twelve"}), ErrorCode::MalformedNumber);
  EXPECT_EQ(code({"exponents", "--bogus", "1"}), ErrorCode::UnknownFlag);
  EXPECT_EQ(code({"frobnicate"}), ErrorCode::UnknownFlag);
  EXPECT_EQ(code({"dioph", "--x", "pi"}), ErrorCode::UnknownFlag);
  EXPECT_EQ(code({"expsum", "--f", "x^3/2 + x^", "--X", "10"}), ErrorCode::MalformedPolynomial);
  EXPECT_EQ(code({"search-min", "--f", "x^2", "--xi", "pi", "--X", "10"}), ErrorCode::NoNonIntegralExponent);
}

TEST(Parse, ConfigFileAndOverride) {
  const std::string text = "# sample\nsubcommand = exponents\nk = 13\ntheta = 9/2\nseed = 7\n";
  auto cfg = parse_config({"--theta", "5"}, text);
  EXPECT_EQ(cfg.integer("k"), 13);
  EXPECT_EQ(cfg.rational("theta"), Rational(5));
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_THROW(parse_config({}, std::string("k 12\n")), Error);
}

TEST(Run, ExponentsJson) {
  auto r = cli({"exponents", "--k", "12", "--theta", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"rho\": \"2/35937\""), std::string::npos);
  EXPECT_NE(r.out.find("\"b_threshold\": \"439/660\""), std::string::npos);
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["metadata"]["inputs"]["theta"], "5");
}

TEST(Run, SearchMinCsv) {
  auto r = cli({"search-min", "--xi", "sqrt2", "--f", "1*x^2+1*x^3/2", "--relax", "--X", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("X,p_argmin,min_distance,ambiguous_floors\n20,11,0.0315292925"), std::string::npos)
      << r.out;
  EXPECT_NE(r.out.find("# inputs.xi: sqrt2"), std::string::npos);
}

TEST(Run, InvalidOutputDirectory) {
  auto r = cli({"exponents", "--k", "12", "--theta", "5", "--out", "/nonexistent-dir/x/out.json"});
  EXPECT_EQ(r.code, kExitIo);
}

TEST(Run, ExitCodes) {
  EXPECT_EQ(cli({"exponents", "--k", "twelve"}).code, kExitUsage);
  EXPECT_EQ(cli({"sieve-witness", "--values", "0.001", "--M", "2"}).code, kExitAssertion);
  EXPECT_EQ(cli({"exponents", "--config", "/nonexistent-dir/cfg.txt"}).code, kExitIo);
  EXPECT_EQ(cli({"search-min", "--xi", "pi", "--f", "x^3/2", "--X", "50", "--cap", "32", "--strict"}).code,
            kExitPrecision);
}

TEST(Run, Subcommands) {
  auto ok = [](std::vector<std::string> a) {
    auto r = cli(a);
    EXPECT_EQ(r.code, 0) << a[0] << ": " << r.err;
    return r.out;
  };
  EXPECT_NE(ok({"primes", "--limit", "30"}).find("\n29\n"), std::string::npos);
  EXPECT_NE(ok({"hbparams", "--Y", "1000000"}).find("\"holds\": false"), std::string::npos);
  EXPECT_NE(ok({"dioph", "approx", "--x", "pi", "--Q", "10"}).find("\"q\": \"7\""), std::string::npos);
  EXPECT_NE(ok({"dioph", "claims", "--claim", "C53", "--samples", "5"}).find("\"dirichlet_ok\": 5"),
            std::string::npos);
  EXPECT_NE(ok({"claims", "--samples", "3"}).find("C54"), std::string::npos);
  EXPECT_NE(ok({"expsum", "--f", "x^3/2", "--y", "0", "--X", "30", "--primes-only"}).find("\"terms\": 10"),
            std::string::npos);
  EXPECT_NE(ok({"expsum", "--f", "x^3/2", "--y", "1/3", "--X", "100", "--vonmangoldt"}).find("vonmangoldt"),
            std::string::npos);
  EXPECT_NE(ok({"sieve-witness", "--values", "0.5,0.5,0.5", "--M", "2"}).find("\"m\": 1"), std::string::npos);
  EXPECT_NE(ok({"multiple-search", "--m", "3", "--f", "x^3/2", "--limit", "100"}).find("\"p\": 7"),
            std::string::npos);
  std::string s;
  for (int j = 1; j <= 12; ++j) s += "x^" + std::to_string(j) + "+";
  EXPECT_NE(ok({"case1-demo", "--xi", "sqrt2", "--f", s + "x^9/2", "--X", "500"}).find("\"sum3\""),
            std::string::npos);
}

TEST(Run, SearchThenFit) {
  const auto csv = temp_path("grid.csv");
  auto r = cli({"search-min", "--xi", "pi", "--f", "x^2+x^5/2", "--X", "100,1000,10000", "--out", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto fit = cli({"fit-decay", "--in", csv.string()});
  ASSERT_EQ(fit.code, 0) << fit.err;
  auto doc = nlohmann::json::parse(fit.out);
  EXPECT_LT(doc["result"]["slope"].get<double>(), 0.5);
  std::filesystem::remove(csv);
}

TEST(Run, ByteIdenticalAcrossRunsAndThreads) {
  std::string s;
  for (int j = 1; j <= 12; ++j) s += "x^" + std::to_string(j) + "+";
  const std::vector<std::vector<std::string>> runs = {
      {"search-min", "--xi", "phi", "--f", s + "x^9/2", "--X", "1000,5000", "--sanity"},
      {"expsum", "--f", "x^3/2", "--y", "sqrt2", "--X", "20000"},
      {"claims", "--samples", "10"},
      {"sieve-witness", "--N", "60", "--M", "9"},
  };
  for (const auto& base : runs) {
    std::string first;
    for (const char* threads : {"1", "4", "1"}) {
      const auto path = temp_path(std::string("repro_") + threads);
      auto args = base;
      args.insert(args.end(), {"--threads", threads, "--out", path.string()});
      auto r = cli(args);
      ASSERT_EQ(r.code, 0) << base[0] << ": " << r.err;
      const std::string bytes = slurp(path);
      std::filesystem::remove(path);
      if (first.empty()) {
        first = bytes;
      } else {
        EXPECT_EQ(bytes, first) << base[0];
      }
    }
  }
}
