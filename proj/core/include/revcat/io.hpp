#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "revcat/categorizer.hpp"
#include "revcat/models.hpp"
#include "revcat/population.hpp"
#include "revcat/rum.hpp"

namespace revcat::io {

using Json = nlohmann::ordered_json;

/// Reads and parses a UTF-8 JSON file. Throws Error(ParseError) with the
/// file name and line/column of a syntax error.
Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& json);
std::string dump(const Json& json);

/// {"universe": [...], "menus": [{"items": [...], "probs": {"a": "1/2"}}]}
RawDataset parse_dataset(const Json& json);
/// Canonical form: sorted universe, menus by size then lexicographic, sorted keys.
Json to_json(const StochasticChoice& p);

Json rational_json(const Rational& value);
/// Accepts a JSON string ("1/2", "0.5") or a JSON integer.
Rational parse_rational_json(const Json& json);

Json items_json(const Universe& universe, ItemSet set);
ItemSet parse_items(const Universe& universe, const Json& json);

/// [["a","b"],["c"]]
Json to_json(const Partition& partition, const Universe& universe);
Partition parse_partition(const Universe& universe, const Json& json);

Json to_json(const Counterexample& ce, const Universe& universe);
Json to_json(const AxiomVerdict& verdict, const Universe& universe);

/// {"universe", "partition", "omega": dataset, "sigmas": [dataset...]}
Json to_json(const Decomposition& d);
Decomposition parse_decomposition(const Json& json, const Tolerance& tol = {});
/// omega given per menu: [{"menu": [...], "weights": {"class:a": "1/2"}}]
Json to_json(const WeakDecomposition& d);
Json to_json(const DecompositionFailure& failure, const Universe& universe);

/// {"universe", "partition", "choices": [{"base": {"class:a,class:c": "class:a"},
///  "fibers": {"class:a": {"a,b": "a"}}, "weight": "1/5"}]}. Only menus with
/// two or more members are listed; the rest are forced.
Json to_json(const PopulationDistribution& q);
PopulationDistribution parse_population(const Json& json);
Json to_json(const PopulationRefutation& refutation, const Universe& universe);
PopulationRefutation parse_population_refutation(const Universe& universe, const Json& json);

/// [{"order": ["a","b","c"], "weight": "1/6"}]
Json to_json(const RumRepresentation& rep);
RumRepresentation parse_rum(const Universe& universe, const Json& json);
/// {"kind": "block_marschak", ...} or {"kind": "farkas", "rows": [...], "multipliers": [...]}
Json to_json(const RumRefutation& refutation, const Universe& universe);
RumRefutation parse_rum_refutation(const Universe& universe, const Json& json);

struct ModelSpec {
  std::string model;
  Universe universe;
  /// Luce utilities, NSC item utilities, or the within-class Luce weights of
  /// an SCwC model.
  std::vector<Rational> u;
  std::optional<Partition> partition;
  std::optional<NestSpec> nest;
  std::optional<WeightFamilySpec> family;
};

/// Models: "luce" {u}; "nested_logit" {u, partition, lambda}; "nsc" {u,
/// partition, v: {"a,b": "2", ...}} or {u, partition, nest_weights}; "scwc"
/// {u, partition, family, beta | salience | reference_u + theta}. lambda and
/// nest_weights are arrays aligned with "partition" as written.
ModelSpec parse_model_spec(const Json& json);
StochasticChoice generate(const ModelSpec& spec);

Json to_json(const Classification& c, const Universe& universe);

}  // namespace revcat::io
