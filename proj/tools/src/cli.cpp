#include "revcat_cli/cli.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "revcat/error.hpp"

namespace revcat::cli {

namespace fs = std::filesystem;
using io::Json;

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  char buffer[1 << 14];
  while (in) {
    in.read(buffer, sizeof buffer);
    EVP_DigestUpdate(ctx.get(), buffer, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &length);
  std::ostringstream hex;
  for (unsigned int k = 0; k < length; ++k) hex << std::hex << std::setw(2) << std::setfill('0') << int{digest[k]};
  return hex.str();
}

Json RunReport::to_json() const {
  Json out = {{"command", command}, {"inputs", inputs}, {"verdicts", verdicts}};
  if (!artifact.is_null()) out["artifact"] = artifact;
  out["artifacts"] = artifacts;
  out["exit_code"] = exit_code;
  if (elapsed_ms) out["timing_ms"] = *elapsed_ms;
  return out;
}

namespace {

Json read_input(RunReport& report, const fs::path& path) {
  report.inputs.push_back({{"path", path.string()}, {"sha256", sha256_file(path)}});
  return io::read_json_file(path);
}

StochasticChoice load_dataset(RunReport& report, const GlobalOptions& options, const fs::path& path) {
  return validate(io::parse_dataset(read_input(report, path)), options.tol);
}

// Writes the payload to --out (when given) and attaches it to the report.
void emit(RunReport& report, const GlobalOptions& options, Json payload) {
  if (options.out) {
    io::write_json_file(*options.out, payload);
    report.artifacts.push_back(options.out->string());
  }
  report.artifact = std::move(payload);
}

Json load_artifact(RunReport& report, const GlobalOptions& options) { return read_input(report, *options.verify); }

void record_verification(RunReport& report, bool valid, const std::string& detail = {}) {
  report.verdicts["verified"] = valid;
  if (!detail.empty()) report.verdicts["verification"] = detail;
  report.exit_code = valid ? kExitClean : kExitRefuted;
}

std::vector<ItemSet> candidate_sets(const StochasticChoice& p) {
  std::vector<ItemSet> out;
  for_each_nonempty_subset(p.all(), [&](ItemSet s) {
    if (s.size() > 1 && s.size() < p.size()) out.push_back(s);
  });
  std::sort(out.begin(), out.end(), size_descending_less);
  return out;
}

Json sets_json(const Universe& universe, const std::vector<ItemSet>& sets) {
  Json out = Json::array();
  for (ItemSet s : sets) out.push_back(io::items_json(universe, s));
  return out;
}

std::optional<Counterexample> category_counterexample(const StochasticChoice& p, ItemSet set, bool weak,
                                                      const Tolerance& tol) {
  if (weak) return is_weak_category(p, set, tol).counterexample;
  const CategoryVerdict verdict = is_category(p, set, tol);
  return verdict.cind.holds ? verdict.cneu.counterexample : verdict.cind.counterexample;
}

Partition parse_partition_option(RunReport& report, const Universe& universe, const std::string& text) {
  Json json;
  if (!text.empty() && text.front() == '[') {
    try {
      json = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::ParseError, std::string("inline partition: ") + e.what());
    }
  } else {
    json = read_input(report, text);
  }
  if (json.is_object() && json.contains("partition")) json = json["partition"];
  return io::parse_partition(universe, json);
}

WeakDecomposition parse_weak(const Json& json, const Tolerance& tol) {
  const Universe universe(json.at("universe").get<std::vector<std::string>>());
  Partition partition = io::parse_partition(universe, json.at("partition"));
  const Universe index = partition.index_universe(universe);
  std::vector<std::vector<Rational>> family(std::size_t{1} << universe.size());
  for (const Json& entry : json.at("omega_family")) {
    const ItemSet menu = io::parse_items(universe, entry.at("menu"));
    auto& row = family[menu.mask()];
    row.assign(static_cast<std::size_t>(partition.size()), Rational(0));
    for (auto it = entry.at("weights").begin(); it != entry.at("weights").end(); ++it) {
      row[static_cast<std::size_t>(index.index_of(it.key()))] = io::parse_rational_json(it.value());
    }
  }
  std::vector<StochasticChoice> sigmas;
  for (const Json& sigma : json.at("sigmas")) sigmas.push_back(validate(io::parse_dataset(sigma), tol));
  return WeakDecomposition{universe, std::move(partition), std::move(family), std::move(sigmas)};
}

template <typename Body>
RunReport guarded(std::string command, const GlobalOptions& options, Body&& body) {
  RunReport report;
  report.command = std::move(command);
  const auto start = std::chrono::steady_clock::now();
  try {
    body(report);
  } catch (const Error& e) {
    report.verdicts = {{"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}}};
    report.artifact = nullptr;
    report.exit_code = kExitError;
  } catch (const nlohmann::json::exception& e) {
    report.verdicts = {{"error", {{"code", "ParseError"}, {"message", e.what()}}}};
    report.artifact = nullptr;
    report.exit_code = kExitError;
  }
  if (options.timing) {
    report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return report;
}

}  // namespace

RunReport cmd_validate(const GlobalOptions& options, const fs::path& dataset) {
  return guarded("validate", options, [&](RunReport& report) {
    const StochasticChoice p = load_dataset(report, options, dataset);
    report.verdicts = {{"valid", true}, {"positive", p.positive()}, {"n", p.size()}};
    if (options.verify) {
      record_verification(report, load_artifact(report, options) == io::to_json(p), "canonical dataset comparison");
      return;
    }
    emit(report, options, io::to_json(p));
  });
}

RunReport cmd_detect(const GlobalOptions& options, const fs::path& dataset, bool weak) {
  return guarded("detect", options, [&](RunReport& report) {
    const StochasticChoice p = load_dataset(report, options, dataset);
    const Universe& u = p.universe();
    if (options.verify) {
      const Json artifact = load_artifact(report, options);
      std::vector<ItemSet> categories;
      for (const Json& c : artifact.at("categories")) categories.push_back(io::parse_items(u, c));
      bool valid = true;
      std::string detail = "all checks replayed";
      for (ItemSet c : categories) {
        const bool holds = weak ? is_weak_category(p, c, options.tol).holds : is_category(p, c, options.tol).holds();
        if (!holds) {
          valid = false;
          detail = "listed category " + u.describe(c) + " fails";
        }
      }
      std::vector<ItemSet> covered = categories;
      for (const Json& r : artifact.at("rejections")) {
        const ItemSet set = io::parse_items(u, r.at("set"));
        covered.push_back(set);
        if (r.contains("pruned_by")) {
          const ItemSet by = io::parse_items(u, r.at("pruned_by"));
          const bool listed = std::find(categories.begin(), categories.end(), by) != categories.end();
          if (!listed || !set.intersects(by) || set.subset_of(by)) {
            valid = false;
            detail = "bad pruning record for " + u.describe(set);
          }
          continue;
        }
        Counterexample ce;
        const Json& j = r.at("counterexample");
        const std::string axiom = j.at("axiom").get<std::string>();
        ce.axiom = axiom == "c-IND" ? Axiom::CInd : Axiom::CNeu;
        ce.subset = io::parse_items(u, j.at("subset"));
        ce.external = io::parse_items(u, j.at("external"));
        ce.reference = io::parse_items(u, j.at("reference"));
        if (!j.at("item").is_null()) ce.item = u.index_of(j.at("item").get<std::string>());
        if (!j.at("other").is_null()) ce.other = u.index_of(j.at("other").get<std::string>());
        ce.lhs = io::parse_rational_json(j.at("lhs"));
        ce.rhs = io::parse_rational_json(j.at("rhs"));
        const bool about_set = ce.axiom == Axiom::CNeu ? ce.reference == set : ce.subset.subset_of(set) && !ce.external.intersects(set);
        if (!about_set || !reproduces(p, ce, options.tol)) {
          valid = false;
          detail = "counterexample for " + u.describe(set) + " does not reproduce";
        }
      }
      std::sort(covered.begin(), covered.end(), size_descending_less);
      if (covered != candidate_sets(p)) {
        valid = false;
        detail = "candidate sets are not all accounted for";
      }
      if (!weak) {
        const Json& cp = artifact.at("coarsest_partition");
        if (cp.is_null() != categories.empty()) {
          valid = false;
          detail = "coarsest partition presence disagrees with the categories";
        } else if (!cp.is_null() && !decompose_scc(p, io::parse_partition(u, cp), options.tol).ok()) {
          valid = false;
          detail = "coarsest partition does not decompose the data";
        }
      }
      record_verification(report, valid, detail);
      return;
    }

    const std::vector<ItemSet> categories = enumerate_categories(p, weak, options.tol, options.limits);
    Json rejections = Json::array();
    for (ItemSet set : candidate_sets(p)) {
      if (std::find(categories.begin(), categories.end(), set) != categories.end()) continue;
      auto pruned = std::find_if(categories.begin(), categories.end(),
                                 [&](ItemSet c) { return set.intersects(c) && !set.subset_of(c); });
      if (!weak && options.tol.exact() && pruned != categories.end()) {
        rejections.push_back({{"set", io::items_json(u, set)}, {"pruned_by", io::items_json(u, *pruned)}});
        continue;
      }
      const auto ce = category_counterexample(p, set, weak, options.tol);
      if (!ce) throw Error(ErrorCode::Internal, "rejected set without a counterexample");
      rejections.push_back({{"set", io::items_json(u, set)}, {"counterexample", io::to_json(*ce, u)}});
    }
    Json payload = {{"weak", weak}, {"categories", sets_json(u, categories)}, {"rejections", rejections}};
    report.verdicts["categories"] = sets_json(u, categories);
    if (weak) {
      report.verdicts["nondegenerate_scwc"] = !categories.empty();
      report.verdicts["summary"] = categories.empty() ? "no non-trivial weak category; not SCwC" : "non-degenerate SCwC";
    } else {
      const std::optional<Partition> coarsest = coarsest_partition(p, options.tol, options.limits);
      const PartitionPoset poset = partition_poset(p, options.tol, options.limits);
      payload["coarsest_partition"] = coarsest ? io::to_json(*coarsest, u) : Json(nullptr);
      report.verdicts["coarsest_partition"] = payload["coarsest_partition"];
      Json members = Json::array();
      for (const Partition& m : poset.members) members.push_back(io::to_json(m, u));
      Json order = Json::array();
      for (std::size_t i = 0; i < poset.members.size(); ++i) {
        for (std::size_t j = 0; j < poset.members.size(); ++j) {
          if (poset.coarser[i][j]) order.push_back({i, j});
        }
      }
      report.verdicts["poset"] = {{"members", members}, {"coarser_pairs", order},
                                  {"maximum", poset.maximum ? Json(*poset.maximum) : Json(nullptr)}};
      report.verdicts["nondegenerate_scc"] = coarsest.has_value();
      report.verdicts["summary"] = coarsest ? "non-degenerate SCC" : "no non-trivial category; not SCC";
    }
    report.exit_code = categories.empty() ? kExitRefuted : kExitClean;
    emit(report, options, std::move(payload));
  });
}

RunReport cmd_decompose(const GlobalOptions& options, const fs::path& dataset, const std::string& partition_text,
                        bool weak) {
  return guarded("decompose", options, [&](RunReport& report) {
    const StochasticChoice p = load_dataset(report, options, dataset);
    const Universe& u = p.universe();
    if (options.verify) {
      const Json artifact = load_artifact(report, options);
      if (artifact.contains("omega")) {
        const Decomposition d = io::parse_decomposition(artifact, options.tol);
        record_verification(report, d.universe == u && compose(d) == p, "composed decomposition equals the data");
      } else if (artifact.contains("omega_family")) {
        const WeakDecomposition d = parse_weak(artifact, options.tol);
        record_verification(report, d.universe == u && compose(d) == p, "composed weak decomposition equals the data");
      } else {
        const Partition partition = io::parse_partition(u, artifact.at("partition"));
        const bool weak_failure = artifact.value("weak", false);
        const bool fails = weak_failure ? !decompose_scwc(p, partition, options.tol).ok()
                                        : !decompose_scc(p, partition, options.tol).ok();
        bool valid = fails;
        const Json& f = artifact.at("failure");
        if (f.contains("cind")) {
          const Json& j = f.at("cind");
          Counterexample ce;
          ce.axiom = Axiom::CInd;
          ce.subset = io::parse_items(u, j.at("subset"));
          ce.external = io::parse_items(u, j.at("external"));
          ce.item = u.index_of(j.at("item").get<std::string>());
          ce.other = u.index_of(j.at("other").get<std::string>());
          ce.lhs = io::parse_rational_json(j.at("lhs"));
          ce.rhs = io::parse_rational_json(j.at("rhs"));
          valid = valid && reproduces(p, ce, options.tol);
        }
        if (f.contains("observed")) {
          valid = valid && io::parse_rational_json(f.at("observed")) ==
                               p.prob(u.index_of(f.at("item").get<std::string>()), io::parse_items(u, f.at("menu")));
        }
        record_verification(report, valid, "failure replayed against the data");
      }
      return;
    }

    std::optional<Partition> partition;
    if (partition_text == "auto") {
      if (weak) {
        const std::vector<ItemSet> weak_categories = enumerate_categories(p, true, options.tol, options.limits);
        if (!weak_categories.empty()) {
          std::vector<ItemSet> classes{weak_categories.front()};
          for (Item a : p.all() - weak_categories.front()) classes.push_back(ItemSet::single(a));
          partition = Partition(p.size(), std::move(classes));
        }
      } else {
        partition = coarsest_partition(p, options.tol, options.limits);
      }
      if (!partition) {
        report.verdicts = {{"decomposed", false},
                           {"summary", weak ? "no non-trivial weak category" : "no non-trivial category"}};
        report.exit_code = kExitRefuted;
        return;
      }
    } else {
      partition = parse_partition_option(report, u, partition_text);
    }
    report.verdicts["partition"] = io::to_json(*partition, u);
    if (weak) {
      auto result = decompose_scwc(p, *partition, options.tol);
      report.verdicts["decomposed"] = result.ok();
      if (result.ok()) {
        emit(report, options, io::to_json(result.value()));
      } else {
        report.exit_code = kExitRefuted;
        emit(report, options, {{"weak", true}, {"partition", io::to_json(*partition, u)}, {"failure", io::to_json(result.failure(), u)}});
      }
      return;
    }
    auto result = decompose_scc(p, *partition, options.tol);
    report.verdicts["decomposed"] = result.ok();
    if (result.ok()) {
      emit(report, options, io::to_json(result.value()));
    } else {
      report.exit_code = kExitRefuted;
      report.verdicts["summary"] = result.failure().describe(u);
      emit(report, options, {{"weak", false}, {"partition", io::to_json(*partition, u)}, {"failure", io::to_json(result.failure(), u)}});
    }
  });
}

RunReport cmd_rum(const GlobalOptions& options, const fs::path& dataset, const std::string& local,
                  const std::string& method) {
  return guarded("rum", options, [&](RunReport& report) {
    const StochasticChoice p = load_dataset(report, options, dataset);
    const Universe& u = p.universe();
    std::optional<ItemSet> subset;
    if (!local.empty()) {
      std::vector<std::string> ids;
      std::stringstream stream(local);
      std::string id;
      while (std::getline(stream, id, ',')) ids.push_back(id);
      subset = u.set_of(ids);
      report.verdicts["subset"] = io::items_json(u, *subset);
    }
    if (options.verify) {
      const Json artifact = load_artifact(report, options);
      bool valid = false;
      if (artifact.is_array()) {
        if (subset) {
          valid = locally_rationalizes(p, *subset, io::parse_rum(Universe(u.ids_of(*subset)), artifact));
        } else {
          valid = rationalizes(io::parse_rum(u, artifact), p);
        }
      } else {
        const RumRefutation refutation = io::parse_rum_refutation(u, artifact.at("certificate"));
        valid = subset ? refutes_local(refutation, p, *subset) : refutes(refutation, p);
      }
      record_verification(report, valid, artifact.is_array() ? "witness marginals replayed" : "certificate replayed");
      return;
    }
    if (method != "flow" && method != "linear") throw Error(ErrorCode::BadParameter, "method must be flow or linear");
    auto result = subset ? check_local_rationalizability(p, *subset, options.limits)
                         : check_rum(p, options.limits, method == "flow" ? RumMethod::Flow : RumMethod::Linear);
    const char* key = subset ? "locally_rationalizable" : "rum";
    report.verdicts[key] = result.ok();
    if (result.ok()) {
      report.verdicts["support"] = result.value().terms.size();
      emit(report, options, io::to_json(result.value()));
      return;
    }
    report.exit_code = kExitRefuted;
    report.verdicts["summary"] = result.failure().describe(u);
    emit(report, options, {{"certificate", io::to_json(result.failure(), u)}});
  });
}

RunReport cmd_population(const GlobalOptions& options, const std::string& subcommand,
                         const std::vector<fs::path>& paths) {
  return guarded("population " + subcommand, options, [&](RunReport& report) {
    auto need = [&](std::size_t count) {
      if (paths.size() != count) {
        throw Error(ErrorCode::BadParameter, "population " + subcommand + " takes " + std::to_string(count) + " path(s)");
      }
    };
    if (subcommand == "enumerate") {
      need(1);
      const Json spec = read_input(report, paths[0]);
      const Universe universe(spec.at("universe").get<std::vector<std::string>>());
      const Partition partition = io::parse_partition(universe, spec.at("partition"));
      if (options.verify) {
        const PopulationDistribution q = io::parse_population(load_artifact(report, options));
        std::vector<ResolvableChoice> listed;
        for (const auto& entry : q.weights) listed.push_back(entry.first);
        record_verification(report, q.partition == partition && listed == enumerate_resolvable(partition, options.limits),
                            "enumeration replayed");
        return;
      }
      const Integer count = count_resolvable(partition);
      report.verdicts["count"] = count.get_str();
      std::vector<ResolvableChoice> choices = enumerate_resolvable(partition, options.limits);
      PopulationDistribution uniform{universe, partition, {}};
      const Rational weight(1, static_cast<unsigned long>(choices.size()));
      for (ResolvableChoice& c : choices) uniform.weights.emplace_back(std::move(c), weight);
      emit(report, options, io::to_json(uniform));
    } else if (subcommand == "induce") {
      need(1);
      const PopulationDistribution q = io::parse_population(read_input(report, paths[0]));
      const StochasticChoice p = induce_choice(q);
      if (options.verify) {
        record_verification(report, validate(io::parse_dataset(load_artifact(report, options))) == p,
                            "induced choice replayed");
        return;
      }
      report.verdicts["positive"] = p.positive();
      report.verdicts["condition1"] = check_condition1(p, q.partition).holds;
      emit(report, options, io::to_json(p));
    } else if (subcommand == "synthesize") {
      need(2);
      const StochasticChoice p = load_dataset(report, options, paths[0]);
      const Partition partition = parse_partition_option(report, p.universe(), paths[1].string());
      if (options.verify) {
        const Json artifact = load_artifact(report, options);
        bool valid = false;
        if (artifact.contains("choices")) {
          valid = induce_choice(io::parse_population(artifact)) == p;
        } else if (artifact.contains("certificate")) {
          valid = refutes(io::parse_population_refutation(p.universe(), artifact.at("certificate")), p, partition,
                          options.limits);
        } else {
          valid = !check_condition1(p, partition).holds;
        }
        record_verification(report, valid, "population artifact replayed");
        return;
      }
      const AxiomVerdict condition = check_condition1(p, partition);
      report.verdicts["condition1"] = io::to_json(condition, p.universe());
      if (!condition.holds) {
        report.exit_code = kExitRefuted;
        emit(report, options, {{"condition1", io::to_json(*condition.counterexample, p.universe())}});
        return;
      }
      try {
        const PopulationFit fit = q_from_condition1(p, partition, options.limits);
        report.verdicts["representable"] = true;
        report.verdicts["route"] = std::string(to_string(fit.route));
        emit(report, options, io::to_json(fit.q));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotRepresentable) throw;
        auto solved = solve_population(p, partition, options.limits);
        report.verdicts["representable"] = false;
        report.exit_code = kExitRefuted;
        emit(report, options, {{"certificate", io::to_json(solved.failure(), p.universe())}});
      }
    } else {
      throw Error(ErrorCode::BadParameter, "unknown population subcommand '" + subcommand + "'");
    }
  });
}

RunReport cmd_synthesize(const GlobalOptions& options, const fs::path& model_spec) {
  return guarded("synthesize", options, [&](RunReport& report) {
    const io::ModelSpec spec = io::parse_model_spec(read_input(report, model_spec));
    const StochasticChoice p = io::generate(spec);
    report.verdicts["model"] = spec.model;
    if (options.verify) {
      record_verification(report, validate(io::parse_dataset(load_artifact(report, options))) == p,
                          "generated dataset replayed");
      return;
    }
    report.verdicts["positive"] = p.positive();
    emit(report, options, io::to_json(p));
  });
}

RunReport cmd_classify(const GlobalOptions& options, const fs::path& dataset) {
  return guarded("classify", options, [&](RunReport& report) {
    const StochasticChoice p = load_dataset(report, options, dataset);
    const Json classification = io::to_json(classify(p, options.limits), p.universe());
    report.verdicts = classification.at("regions");
    if (options.verify) {
      record_verification(report, load_artifact(report, options) == classification, "classification recomputed");
      return;
    }
    emit(report, options, classification);
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Revealed categorization analysis of stochastic choice data", "revcat"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string epsilon = "0";
  std::optional<int> max_n;
  std::string out_path;
  std::string verify_path;
  bool timing = false;
  app.add_option("--epsilon", epsilon, "Absolute tolerance for every equality test (exact rational)");
  app.add_option("--max-n", max_n, "Override the size bounds of the exponential procedures");
  app.add_option("--out", out_path, "Write the main artifact to this file");
  app.add_option("--verify", verify_path, "Replay an artifact against the inputs");
  app.add_flag("--timing", timing, "Include wall-clock time in the report");

  std::string dataset;
  std::string partition = "auto";
  std::string local;
  std::string method = "flow";
  std::string model;
  std::string population_command;
  std::vector<std::string> population_paths;
  bool weak = false;

  auto* validate_cmd = app.add_subcommand("validate", "Check and canonicalize a dataset");
  validate_cmd->add_option("dataset", dataset)->required();
  auto* detect_cmd = app.add_subcommand("detect", "Search for revealed categories");
  detect_cmd->add_option("dataset", dataset)->required();
  detect_cmd->add_flag("--weak", weak, "Search weak categories (c-IND only)");
  auto* decompose_cmd = app.add_subcommand("decompose", "Two-stage decomposition");
  decompose_cmd->add_option("dataset", dataset)->required();
  decompose_cmd->add_option("--partition", partition, "auto, a JSON file, or inline JSON");
  decompose_cmd->add_flag("--weak", weak, "Menu-dependent first stage");
  auto* rum_cmd = app.add_subcommand("rum", "Random utility rationalizability");
  rum_cmd->add_option("dataset", dataset)->required();
  rum_cmd->add_option("--local", local, "Comma-separated ids of G for local rationalizability");
  rum_cmd->add_option("--method", method, "flow or linear");
  auto* population_cmd = app.add_subcommand("population", "Populations of resolvable choices");
  population_cmd->add_option("action", population_command, "enumerate | induce | synthesize")->required();
  population_cmd->add_option("paths", population_paths, "Input files")->required();
  auto* synthesize_cmd = app.add_subcommand("synthesize", "Generate a dataset from a model spec");
  synthesize_cmd->add_option("--model", model, "Model spec JSON")->required();
  auto* classify_cmd = app.add_subcommand("classify", "Place a dataset in the model diagram");
  classify_cmd->add_option("dataset", dataset)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitClean : kExitError;
  }

  GlobalOptions options;
  try {
    options.tol.epsilon = parse_rational(epsilon);
    if (sgn(options.tol.epsilon) < 0) throw Error(ErrorCode::BadParameter, "epsilon must be nonnegative");
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitError;
  }
  if (!max_n) {
    if (const char* env = std::getenv("REVEALED_CATEGORIES_MAX_N")) {
      try {
        max_n = std::stoi(env);
      } catch (const std::exception&) {
        err << "REVEALED_CATEGORIES_MAX_N must be an integer\n";
        return kExitError;
      }
    }
  }
  if (max_n) {
    options.limits.max_categorize_n = *max_n;
    options.limits.max_rum_n = *max_n;
    options.limits.max_nsc_n = *max_n;
  }
  if (!out_path.empty()) options.out = out_path;
  if (!verify_path.empty()) options.verify = verify_path;
  options.timing = timing;

  RunReport report;
  if (validate_cmd->parsed()) {
    report = cmd_validate(options, dataset);
  } else if (detect_cmd->parsed()) {
    report = cmd_detect(options, dataset, weak);
  } else if (decompose_cmd->parsed()) {
    report = cmd_decompose(options, dataset, partition, weak);
  } else if (rum_cmd->parsed()) {
    report = cmd_rum(options, dataset, local, method);
  } else if (population_cmd->parsed()) {
    std::vector<fs::path> paths(population_paths.begin(), population_paths.end());
    report = cmd_population(options, population_command, paths);
  } else if (synthesize_cmd->parsed()) {
    report = cmd_synthesize(options, model);
  } else {
    report = cmd_classify(options, dataset);
  }
  out << io::dump(report.to_json());
  return report.exit_code;
}

}  // namespace revcat::cli
