#include "revcat/io.hpp"

#include <fstream>
#include <sstream>

#include "revcat/error.hpp"

namespace revcat::io {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const Json& field(const Json& json, const char* key) {
  if (!json.is_object()) parse_fail(std::string("expected an object with \"") + key + "\"");
  auto it = json.find(key);
  if (it == json.end()) parse_fail(std::string("missing field \"") + key + "\"");
  return *it;
}

std::vector<std::string> string_list(const Json& json, const char* what) {
  if (!json.is_array()) parse_fail(std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const Json& entry : json) {
    if (!entry.is_string()) parse_fail(std::string(what) + " must be an array of strings");
    out.push_back(entry.get<std::string>());
  }
  return out;
}

std::string menu_key(const Universe& universe, ItemSet set) {
  std::string out;
  for (Item a : set) {
    if (!out.empty()) out += ",";
    out += universe.id(a);
  }
  return out;
}

ItemSet parse_menu_key(const Universe& universe, const std::string& key) {
  std::vector<std::string> ids;
  std::stringstream stream(key);
  std::string id;
  while (std::getline(stream, id, ',')) ids.push_back(id);
  return universe.set_of(ids);
}

std::vector<Rational> per_item(const Universe& universe, const Json& json, const char* what) {
  if (!json.is_object()) parse_fail(std::string(what) + " must map item ids to values");
  std::vector<Rational> out(static_cast<std::size_t>(universe.size()));
  std::vector<bool> seen(out.size(), false);
  for (auto it = json.begin(); it != json.end(); ++it) {
    const Item a = universe.index_of(it.key());
    out[static_cast<std::size_t>(a)] = parse_rational_json(it.value());
    seen[static_cast<std::size_t>(a)] = true;
  }
  for (std::size_t a = 0; a < seen.size(); ++a) {
    if (!seen[a]) parse_fail(std::string(what) + " has no value for '" + universe.id(static_cast<Item>(a)) + "'");
  }
  return out;
}

// Written class order -> partition index.
std::vector<int> written_order(const Partition& partition, const Universe& universe, const Json& json) {
  std::vector<int> out;
  for (const Json& cls : json) out.push_back(partition.index_of(universe.index_of(string_list(cls, "class").front())));
  return out;
}

std::vector<Rational> aligned(const Json& json, const std::vector<int>& order, const char* what) {
  if (!json.is_array() || json.size() != order.size()) parse_fail(std::string(what) + " must have one entry per class");
  std::vector<Rational> out(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) out[static_cast<std::size_t>(order[k])] = parse_rational_json(json[k]);
  return out;
}

Json rows_json(const Universe& universe, const std::vector<std::pair<Item, ItemSet>>& rows,
               const std::vector<Rational>& multipliers) {
  Json out = {{"kind", "farkas"}, {"rows", Json::array()}, {"multipliers", Json::array()}};
  for (const auto& [item, menu] : rows) {
    if (item < 0) {
      out["rows"].push_back({{"total", true}});
    } else {
      out["rows"].push_back({{"item", universe.id(item)}, {"menu", items_json(universe, menu)}});
    }
  }
  for (const Rational& y : multipliers) out["multipliers"].push_back(rational_json(y));
  return out;
}

void parse_rows(const Universe& universe, const Json& json, std::vector<std::pair<Item, ItemSet>>& rows,
                std::vector<Rational>& multipliers) {
  if (field(json, "kind") != "farkas") parse_fail("expected a farkas certificate");
  for (const Json& row : field(json, "rows")) {
    if (row.contains("total")) {
      rows.emplace_back(-1, ItemSet());
    } else {
      rows.emplace_back(universe.index_of(field(row, "item").get<std::string>()), parse_items(universe, field(row, "menu")));
    }
  }
  for (const Json& y : field(json, "multipliers")) multipliers.push_back(parse_rational_json(y));
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorCode::ParseError,
                path.string() + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + e.what());
  }
}

std::string dump(const Json& json) { return json.dump(2) + "\n"; }

void write_json_file(const std::filesystem::path& path, const Json& json) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  out << dump(json);
}

Json rational_json(const Rational& value) { return format_rational(value); }

Rational parse_rational_json(const Json& json) {
  if (json.is_string()) return parse_rational(json.get<std::string>());
  if (json.is_number_integer()) return parse_rational(json.dump());
  parse_fail("probability " + json.dump() + " must be a string such as \"1/2\" or an integer");
}

Json items_json(const Universe& universe, ItemSet set) {
  Json out = Json::array();
  for (Item a : set) out.push_back(universe.id(a));
  return out;
}

ItemSet parse_items(const Universe& universe, const Json& json) { return universe.set_of(string_list(json, "menu")); }

RawDataset parse_dataset(const Json& json) {
  RawDataset raw;
  raw.universe = string_list(field(json, "universe"), "universe");
  const Json& menus = field(json, "menus");
  if (!menus.is_array()) parse_fail("\"menus\" must be an array");
  for (const Json& menu : menus) {
    RawMenu entry;
    entry.items = string_list(field(menu, "items"), "items");
    const Json& probs = field(menu, "probs");
    if (!probs.is_object()) parse_fail("\"probs\" must map item ids to probabilities");
    for (auto it = probs.begin(); it != probs.end(); ++it) entry.probs.emplace_back(it.key(), parse_rational_json(it.value()));
    raw.menus.push_back(std::move(entry));
  }
  return raw;
}

Json to_json(const StochasticChoice& p) {
  const RawDataset raw = to_raw(p);
  Json out = {{"universe", raw.universe}, {"menus", Json::array()}};
  for (const RawMenu& menu : raw.menus) {
    Json probs = Json::object();
    for (const auto& [id, value] : menu.probs) probs[id] = rational_json(value);
    out["menus"].push_back({{"items", menu.items}, {"probs", probs}});
  }
  return out;
}

Json to_json(const Partition& partition, const Universe& universe) {
  Json out = Json::array();
  for (ItemSet cls : partition.classes()) out.push_back(items_json(universe, cls));
  return out;
}

Partition parse_partition(const Universe& universe, const Json& json) {
  if (!json.is_array()) parse_fail("partition must be an array of classes");
  std::vector<std::vector<std::string>> classes;
  for (const Json& cls : json) classes.push_back(string_list(cls, "class"));
  return Partition::from_ids(universe, classes);
}

Json to_json(const Counterexample& ce, const Universe& universe) {
  Json out = {{"axiom", std::string(to_string(ce.axiom))}};
  out["subset"] = items_json(universe, ce.subset);
  out["external"] = items_json(universe, ce.external);
  out["reference"] = items_json(universe, ce.reference);
  out["item"] = ce.item >= 0 ? Json(universe.id(ce.item)) : Json(nullptr);
  out["other"] = ce.other >= 0 ? Json(universe.id(ce.other)) : Json(nullptr);
  out["lhs"] = rational_json(ce.lhs);
  out["rhs"] = rational_json(ce.rhs);
  out["text"] = ce.describe(universe);
  return out;
}

Json to_json(const AxiomVerdict& verdict, const Universe& universe) {
  Json out = {{"holds", verdict.holds}, {"checked", verdict.checked}};
  if (verdict.counterexample) out["counterexample"] = to_json(*verdict.counterexample, universe);
  return out;
}

Json to_json(const Decomposition& d) {
  Json out = {{"universe", d.universe.ids()}, {"partition", to_json(d.partition, d.universe)}};
  out["omega"] = to_json(d.omega);
  out["sigmas"] = Json::array();
  for (const StochasticChoice& sigma : d.sigmas) out["sigmas"].push_back(to_json(sigma));
  return out;
}

Decomposition parse_decomposition(const Json& json, const Tolerance& tol) {
  const Universe universe(string_list(field(json, "universe"), "universe"));
  Partition partition = parse_partition(universe, field(json, "partition"));
  StochasticChoice omega = validate(parse_dataset(field(json, "omega")), tol);
  std::vector<StochasticChoice> sigmas;
  for (const Json& sigma : field(json, "sigmas")) sigmas.push_back(validate(parse_dataset(sigma), tol));
  return make_decomposition(universe, partition, std::move(omega), std::move(sigmas));
}

Json to_json(const WeakDecomposition& d) {
  Json out = {{"universe", d.universe.ids()}, {"partition", to_json(d.partition, d.universe)}};
  const std::vector<std::string> index_ids = d.partition.index_ids(d.universe);
  out["omega_family"] = Json::array();
  for (ItemSet menu : nonempty_subsets(d.universe.all())) {
    Json weights = Json::object();
    for (int i : d.partition.image(menu)) weights[index_ids[static_cast<std::size_t>(i)]] = rational_json(d.omega(menu, i));
    out["omega_family"].push_back({{"menu", items_json(d.universe, menu)}, {"weights", weights}});
  }
  out["sigmas"] = Json::array();
  for (const StochasticChoice& sigma : d.sigmas) out["sigmas"].push_back(to_json(sigma));
  return out;
}

Json to_json(const DecompositionFailure& failure, const Universe& universe) {
  Json out;
  out["kind"] = failure.kind == DecompositionFailureKind::OmegaIllDefined ? "omega_ill_defined" : "recomposition_mismatch";
  out["class_index"] = failure.class_index;
  if (failure.kind == DecompositionFailureKind::OmegaIllDefined) {
    out["first_menu"] = items_json(universe, failure.first_menu);
    out["second_menu"] = items_json(universe, failure.second_menu);
    out["first_mass"] = rational_json(failure.first_mass);
    out["second_mass"] = rational_json(failure.second_mass);
  } else {
    out["menu"] = items_json(universe, failure.menu);
    out["item"] = universe.id(failure.item);
    out["observed"] = rational_json(failure.observed);
    out["recomposed"] = rational_json(failure.recomposed);
  }
  if (failure.cind) out["cind"] = to_json(*failure.cind, universe);
  out["text"] = failure.describe(universe);
  return out;
}

Json to_json(const PopulationDistribution& q) {
  const Universe& u = q.universe;
  const Universe index = q.partition.index_universe(u);
  Json out = {{"universe", u.ids()}, {"partition", to_json(q.partition, u)}, {"choices", Json::array()}};
  for (const auto& [c, w] : q.weights) {
    Json base = Json::object();
    for (ItemSet j : nonempty_subsets(index.all())) {
      if (j.size() >= 2) base[menu_key(index, j)] = index.id(c.base[j.mask()]);
    }
    Json fibers = Json::object();
    for (int i = 0; i < q.partition.size(); ++i) {
      const ItemSet cls = q.partition.class_at(i);
      Json fiber = Json::object();
      for (ItemSet local : nonempty_subsets(ItemSet::full(cls.size()))) {
        if (local.size() >= 2) {
          fiber[menu_key(u, expand(local, cls))] = u.id(c.fibers[static_cast<std::size_t>(i)][local.mask()]);
        }
      }
      fibers[index.id(i)] = std::move(fiber);
    }
    out["choices"].push_back({{"base", base}, {"fibers", fibers}, {"weight", rational_json(w)}});
  }
  return out;
}

PopulationDistribution parse_population(const Json& json) {
  const Universe universe(string_list(field(json, "universe"), "universe"));
  Partition partition = parse_partition(universe, field(json, "partition"));
  const Universe index = partition.index_universe(universe);
  PopulationDistribution q{universe, partition, {}};
  // Start from the first enumerated choice so singleton menus are filled.
  ResolvableChoice blank;
  blank.base.assign(std::size_t{1} << partition.size(), -1);
  for (std::uint32_t m = 1; m < blank.base.size(); ++m) blank.base[m] = ItemSet(m).first();
  for (ItemSet cls : partition.classes()) {
    std::vector<Item> fiber(std::size_t{1} << cls.size(), -1);
    for (std::uint32_t m = 1; m < fiber.size(); ++m) fiber[m] = expand(ItemSet(m), cls).first();
    blank.fibers.push_back(std::move(fiber));
  }
  for (const Json& entry : field(json, "choices")) {
    ResolvableChoice c = blank;
    const Json& base = field(entry, "base");
    for (auto it = base.begin(); it != base.end(); ++it) {
      c.base[parse_menu_key(index, it.key()).mask()] = index.index_of(it.value().get<std::string>());
    }
    const Json& fibers = field(entry, "fibers");
    for (auto it = fibers.begin(); it != fibers.end(); ++it) {
      const int i = index.index_of(it.key());
      const ItemSet cls = partition.class_at(i);
      for (auto f = it.value().begin(); f != it.value().end(); ++f) {
        const ItemSet menu = parse_menu_key(universe, f.key());
        if (!menu.subset_of(cls)) parse_fail("fiber menu " + f.key() + " leaves its class");
        c.fibers[static_cast<std::size_t>(i)][compress(menu, cls).mask()] = universe.index_of(f.value().get<std::string>());
      }
    }
    q.weights.emplace_back(std::move(c), parse_rational_json(field(entry, "weight")));
  }
  validate_population(q);
  return q;
}

Json to_json(const PopulationRefutation& refutation, const Universe& universe) {
  std::vector<std::pair<Item, ItemSet>> rows;
  for (const PopulationRow& row : refutation.rows) rows.emplace_back(row.item, row.menu);
  return rows_json(universe, rows, refutation.multipliers);
}

PopulationRefutation parse_population_refutation(const Universe& universe, const Json& json) {
  std::vector<std::pair<Item, ItemSet>> rows;
  PopulationRefutation out;
  parse_rows(universe, json, rows, out.multipliers);
  for (const auto& [item, menu] : rows) out.rows.push_back(PopulationRow{item, menu});
  return out;
}

Json to_json(const RumRepresentation& rep) {
  Json out = Json::array();
  for (const RumTerm& term : rep.terms) {
    Json order = Json::array();
    for (Item a : term.order.ranking()) order.push_back(rep.universe.id(a));
    out.push_back({{"order", order}, {"weight", rational_json(term.weight)}});
  }
  return out;
}

RumRepresentation parse_rum(const Universe& universe, const Json& json) {
  if (!json.is_array()) parse_fail("witness must be an array of {order, weight}");
  RumRepresentation rep{universe, {}};
  for (const Json& term : json) {
    std::vector<Item> ranking;
    for (const std::string& id : string_list(field(term, "order"), "order")) ranking.push_back(universe.index_of(id));
    if (static_cast<int>(ranking.size()) != universe.size()) parse_fail("order must rank every alternative");
    rep.terms.push_back(RumTerm{LinearOrder(std::move(ranking)), parse_rational_json(field(term, "weight"))});
  }
  return rep;
}

Json to_json(const RumRefutation& refutation, const Universe& universe) {
  if (refutation.kind == RumRefutation::Kind::NegativeBlockMarschak) {
    return {{"kind", "block_marschak"},
            {"item", universe.id(refutation.item)},
            {"menu", items_json(universe, refutation.menu)},
            {"value", rational_json(refutation.value)}};
  }
  std::vector<std::pair<Item, ItemSet>> rows;
  for (const RumRow& row : refutation.rows) rows.emplace_back(row.item, row.menu);
  return rows_json(universe, rows, refutation.multipliers);
}

RumRefutation parse_rum_refutation(const Universe& universe, const Json& json) {
  RumRefutation out;
  if (field(json, "kind") == "block_marschak") {
    out.kind = RumRefutation::Kind::NegativeBlockMarschak;
    out.item = universe.index_of(field(json, "item").get<std::string>());
    out.menu = parse_items(universe, field(json, "menu"));
    out.value = parse_rational_json(field(json, "value"));
    return out;
  }
  std::vector<std::pair<Item, ItemSet>> rows;
  parse_rows(universe, json, rows, out.multipliers);
  for (const auto& [item, menu] : rows) out.rows.push_back(RumRow{item, menu});
  return out;
}

ModelSpec parse_model_spec(const Json& json) {
  ModelSpec spec;
  spec.model = field(json, "model").get<std::string>();
  const Json& u = field(json, "u");
  if (!u.is_object()) parse_fail("\"u\" must map item ids to utilities");
  std::vector<std::string> ids;
  for (auto it = u.begin(); it != u.end(); ++it) ids.push_back(it.key());
  spec.universe = Universe(ids);
  spec.u = per_item(spec.universe, u, "u");
  if (spec.model == "luce") return spec;

  const Json& written = field(json, "partition");
  spec.partition = parse_partition(spec.universe, written);
  const std::vector<int> order = written_order(*spec.partition, spec.universe, written);
  if (spec.model == "nested_logit") {
    spec.nest = nested_logit_spec(*spec.partition, spec.u, aligned(field(json, "lambda"), order, "lambda"));
  } else if (spec.model == "nsc") {
    if (json.contains("nest_weights")) {
      spec.nest = content_independent_spec(*spec.partition, spec.u, aligned(json["nest_weights"], order, "nest_weights"));
    } else {
      NestSpec nest{*spec.partition, spec.u, {}, std::nullopt};
      for (ItemSet cls : spec.partition->classes()) nest.v.emplace_back(std::size_t{1} << cls.size(), Rational(0));
      const Json& v = field(json, "v");
      for (auto it = v.begin(); it != v.end(); ++it) {
        const ItemSet set = parse_menu_key(spec.universe, it.key());
        const int i = spec.partition->index_of(set.first());
        const ItemSet cls = spec.partition->class_at(i);
        if (!set.subset_of(cls)) parse_fail("v key " + it.key() + " spans several classes");
        nest.v[static_cast<std::size_t>(i)][compress(set, cls).mask()] = parse_rational_json(it.value());
      }
      spec.nest = std::move(nest);
    }
  } else if (spec.model == "scwc") {
    WeightFamilySpec family;
    const std::string kind = field(json, "family").get<std::string>();
    if (kind == "overload" || kind == "flexibility") {
      family.kind = kind == "overload" ? WeightFamily::Overload : WeightFamily::Flexibility;
      family.beta = parse_rational_json(field(json, "beta"));
    } else if (kind == "salience") {
      family.kind = WeightFamily::Salience;
      family.salience = per_item(spec.universe, field(json, "salience"), "salience");
    } else if (kind == "reference") {
      family.kind = WeightFamily::Reference;
      family.u = per_item(spec.universe, field(json, "reference_u"), "reference_u");
      family.theta = parse_rational_json(field(json, "theta"));
    } else {
      parse_fail("unknown weight family '" + kind + "'");
    }
    spec.family = std::move(family);
  } else {
    parse_fail("unknown model '" + spec.model + "'");
  }
  return spec;
}

StochasticChoice generate(const ModelSpec& spec) {
  if (spec.model == "luce") return gen_luce(spec.universe, spec.u);
  if (spec.nest) return gen_nsc(spec.universe, *spec.nest);
  if (!spec.family || !spec.partition) throw Error(ErrorCode::BadParameter, "incomplete model spec");
  // Within-class stage: Luce on u restricted to each class.
  std::vector<StochasticChoice> sigmas;
  for (ItemSet cls : spec.partition->classes()) {
    std::vector<Rational> local;
    for (Item a : cls) local.push_back(spec.u[static_cast<std::size_t>(a)]);
    sigmas.push_back(gen_luce(Universe(spec.universe.ids_of(cls)), local));
  }
  return gen_scwc_weights(spec.universe, *spec.partition, sigmas, *spec.family);
}

namespace {

Json nsc_fit_json(const NscFit& fit, const Universe& universe) {
  Json u = Json::object();
  for (Item a = 0; a < universe.size(); ++a) u[universe.id(a)] = rational_json(fit.u[static_cast<std::size_t>(a)]);
  Json v = Json::object();
  for (int i = 0; i < fit.partition.size(); ++i) {
    const ItemSet cls = fit.partition.class_at(i);
    for (ItemSet local : nonempty_subsets(ItemSet::full(cls.size()))) {
      v[menu_key(universe, expand(local, cls))] = rational_json(fit.v[static_cast<std::size_t>(i)][local.mask()]);
    }
  }
  return {{"partition", to_json(fit.partition, universe)}, {"u", u}, {"v", v}};
}

}  // namespace

Json to_json(const Classification& c, const Universe& universe) {
  Json out;
  out["regions"] = {{"luce", c.luce},
                    {"nested_logit", c.nested_logit},
                    {"nsc", c.nsc},
                    {"nondegenerate_scc", c.nondegenerate_scc},
                    {"nondegenerate_scwc", c.nondegenerate_scwc}};
  if (c.luce) {
    Json u = Json::object();
    for (Item a = 0; a < universe.size(); ++a) u[universe.id(a)] = rational_json(c.luce_fit.u[static_cast<std::size_t>(a)]);
    out["luce_u"] = u;
  } else if (c.luce_fit.failure) {
    out["luce_failure"] = {{"item", universe.id(c.luce_fit.failure->first)},
                           {"menu", items_json(universe, c.luce_fit.failure->second)}};
  }
  out["nsc_fits"] = Json::array();
  for (const NscFit& fit : c.nsc_fits.fits) out["nsc_fits"].push_back(nsc_fit_json(fit, universe));
  if (c.nested_logit_fit) {
    Json lambda = Json::array();
    for (const Rational& l : c.nested_logit_fit->lambda) lambda.push_back(rational_json(l));
    out["nested_logit"] = {{"partition", to_json(c.nested_logit_fit->nsc.partition, universe)}, {"lambda", lambda}};
  }
  out["coarsest_partition"] = c.coarsest ? to_json(*c.coarsest, universe) : Json(nullptr);
  out["weak_categories"] = Json::array();
  for (ItemSet g : c.weak_categories) out["weak_categories"].push_back(items_json(universe, g));
  return out;
}

}  // namespace revcat::io
