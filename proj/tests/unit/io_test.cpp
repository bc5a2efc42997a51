#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "generators.hpp"
#include "helpers.hpp"
#include "revcat/io.hpp"

namespace revcat {
namespace {

using testing::R;

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

TEST(Io, DatasetRoundTripIsCanonicalProperty) {
  testing::Rng rng(151);
  for (int trial = 0; trial < 40; ++trial) {
    const StochasticChoice p = testing::random_choice(rng, testing::letters(testing::uniform_int(rng, 1, 4)));
    const io::Json json = io::to_json(p);
    EXPECT_EQ(validate(io::parse_dataset(json)), p);
    EXPECT_EQ(io::dump(io::to_json(validate(io::parse_dataset(json)))), io::dump(json));
  }
}

TEST(Io, AcceptsDecimalsAndIntegers) {
  const io::Json json = io::Json::parse(R"({"universe": ["b", "a"], "menus": [
      {"items": ["a", "b"], "probs": {"a": "0.25", "b": 0}},
      {"items": ["b", "a"], "probs": {"b": "3/4"}}]})");
  const RawDataset raw = io::parse_dataset(json);
  EXPECT_ERROR_CODE(validate(raw), ErrorCode::MalformedMenu);
  const io::Json single = io::Json::parse(R"({"universe": ["b", "a"], "menus": [
      {"items": ["a", "b"], "probs": {"a": "0.25", "b": "3/4"}}]})");
  const StochasticChoice p = validate(io::parse_dataset(single));
  EXPECT_EQ(p.prob(0, ItemSet{0, 1}), R("1/4"));
  EXPECT_EQ(io::parse_rational_json(io::Json(3)), R("3"));
}

TEST(Io, ParseErrorsCarryLocation) {
  const auto path = temp_file("revcat_io_broken.json");
  {
    std::ofstream out(path);
    out << "{\n  \"universe\": [\"a\",\n  ]\n}\n";
  }
  try {
    io::read_json_file(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
  EXPECT_ERROR_CODE(io::read_json_file(temp_file("revcat_does_not_exist.json")), ErrorCode::ParseError);
  EXPECT_ERROR_CODE(io::parse_dataset(io::Json::parse(R"({"menus": []})")), ErrorCode::ParseError);
  EXPECT_ERROR_CODE(io::parse_rational_json(io::Json(0.5)), ErrorCode::ParseError);
  std::filesystem::remove(path);
}

TEST(Io, PartitionRoundTrip) {
  const Universe u = testing::letters(4);
  const Partition partition(4, {ItemSet{0, 3}, ItemSet{1, 2}});
  const io::Json json = io::to_json(partition, u);
  EXPECT_EQ(io::dump(json), io::dump(io::Json::parse(R"([["a","d"],["b","c"]])")));
  EXPECT_EQ(io::parse_partition(u, json), partition);
  EXPECT_ERROR_CODE(io::parse_partition(u, io::Json::parse(R"([["a","b"]])")), ErrorCode::InvalidPartition);
}

TEST(Io, DecompositionRoundTripProperty) {
  testing::Rng rng(157);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = testing::uniform_int(rng, 3, 5);
    const Decomposition d =
        testing::random_decomposition(rng, testing::letters(n), testing::random_nondegenerate_partition(rng, n));
    const Decomposition back = io::parse_decomposition(io::to_json(d));
    EXPECT_EQ(back.partition, d.partition);
    EXPECT_EQ(back.omega, d.omega);
    EXPECT_EQ(back.sigmas, d.sigmas);
  }
}

TEST(Io, PopulationFileMatchesConstruction) {
  const PopulationDistribution q = io::parse_population(io::read_json_file(testing::data_path("resolvable_mixture_population.json")));
  EXPECT_EQ(induce_choice(q), testing::load("resolvable_mixture.json"));
  const PopulationDistribution back = io::parse_population(io::to_json(q));
  EXPECT_EQ(back.weights, q.weights);
  EXPECT_EQ(back.partition, q.partition);
}

TEST(Io, RumWitnessAndCertificateRoundTrip) {
  testing::Rng rng(163);
  const Universe u = testing::letters(4);
  const RumRepresentation rep = testing::random_rum(rng, u, 3);
  EXPECT_EQ(io::parse_rum(u, io::to_json(rep)), rep);

  const StochasticChoice p = testing::load("no_category.json");
  for (const auto& result : {check_rum(p), solve_rum_system(p)}) {
    ASSERT_FALSE(result.ok());
    const RumRefutation back = io::parse_rum_refutation(p.universe(), io::to_json(result.failure(), p.universe()));
    EXPECT_TRUE(refutes(back, p));
  }
}

TEST(Io, ModelSpecsGenerateExpectedChoices) {
  const auto spec = [](const std::string& name) { return io::parse_model_spec(io::read_json_file(testing::data_path(name))); };
  const StochasticChoice luce = io::generate(spec("model_luce.json"));
  EXPECT_EQ(luce.prob(3, luce.all()), R("2/5"));
  const StochasticChoice nl = io::generate(spec("model_nested_logit.json"));
  EXPECT_EQ(nl.prob(0, nl.all()), R("2/5"));
  EXPECT_EQ(nl.prob(0, ItemSet{0, 2}), R("1/2"));
  const StochasticChoice ci = io::generate(spec("model_content_independent.json"));
  EXPECT_TRUE(decompose_scc(ci, Partition(4, {ItemSet{0, 1}, ItemSet{2, 3}})).ok());
  const StochasticChoice over = io::generate(spec("model_overload.json"));
  EXPECT_TRUE(check_overload(over, ItemSet{0, 1, 2}).holds);
  EXPECT_ERROR_CODE(io::parse_model_spec(io::Json::parse(R"({"model": "probit", "u": {"a": 1}, "partition": [["a"]]})")),
                    ErrorCode::ParseError);
}

TEST(Io, WriteThenReadIsIdentity) {
  const auto path = temp_file("revcat_io_roundtrip.json");
  const io::Json json = io::to_json(testing::load("no_category.json"));
  io::write_json_file(path, json);
  EXPECT_EQ(io::read_json_file(path), json);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace revcat
