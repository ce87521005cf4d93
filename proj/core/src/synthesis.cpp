#include "musep/synthesis.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "musep/tree_pool.hpp"

namespace musep {

namespace {

using json = nlohmann::json;

json model_or_null(const std::optional<KripkeModel>& m) {
  return m ? json::parse(model_to_json(*m)) : json(nullptr);
}

}  // namespace

std::string VerificationReport::to_json() const {
  json j;
  j["verified"] = verified();
  j["modal"] = modal;
  j["entails_left"] = entails_left;
  j["refutes_right"] = refutes_right;
  j["left_counter"] = model_or_null(left_counter);
  j["right_counter"] = model_or_null(right_counter);
  j["spot_checked"] = spot_checked;
  j["spot_failures"] = spot_failures;
  j["spot_depth"] = spot_depth;
  j["craig_ok"] = craig_ok ? json(*craig_ok) : json(nullptr);
  return j.dump(2);
}

std::string VerificationReport::to_text() const {
  std::string s = verified() ? "verified\n" : "NOT verified\n";
  s += std::string("  f entails separator: ") + (entails_left ? "yes" : "no") + "\n";
  s += std::string("  separator refutes f': ") + (refutes_right ? "yes" : "no") + "\n";
  s += "  spot checks: " + std::to_string(spot_checked) + " models (depth <= " + std::to_string(spot_depth) +
       "), " + std::to_string(spot_failures) + " failures\n";
  if (craig_ok) s += std::string("  shared props only: ") + (*craig_ok ? "yes" : "no") + "\n";
  if (left_counter) s += "  model of f and not separator: " + model_to_json(*left_counter) + "\n";
  if (right_counter) s += "  model of separator and f': " + model_to_json(*right_counter) + "\n";
  return s;
}

VerificationReport verify_separator(const Formula& f, const Formula& psi, const Formula& g,
                                    const VerifyOptions& options) {
  VerificationReport r;
  auto info = analyze(psi);
  if (!info.is_modal) throw FormulaError("separator must be modal");
  if (options.allowed_props) {
    bool ok = true;
    for (const auto& p : info.props)
      ok = ok && std::find(options.allowed_props->begin(), options.allowed_props->end(), p) !=
                     options.allowed_props->end();
    r.craig_ok = ok;
  }
  std::vector<Formula> fs{f, psi, g};
  if (options.ontology) fs.push_back(*options.ontology);
  auto alpha = joint_alphabet(fs, options.model_class, options.hint);
  auto theta = class_constraint(options.model_class, alpha.actions, options.ontology);
  bool words = is_word_class(options.model_class);

  auto check_empty = [&](const Formula& x, bool& holds, std::optional<KripkeModel>& counter) {
    auto a = compile(x, alpha.actions, alpha.props, words);
    auto e = analyze_emptiness(a);
    holds = e.empty(a);
    if (!holds) counter = emptiness_witness(a, e, a.initial);
  };
  check_empty(Formula::conj({theta, f, Formula::negation(psi)}), r.entails_left, r.left_counter);
  check_empty(Formula::conj({theta, psi, g}), r.refutes_right, r.right_counter);

  TreePoolConfig cfg;
  cfg.actions = alpha.actions;
  cfg.props = alpha.props;
  cfg.branching = words ? 1 : options.spot_branching;
  cfg.decorated = true;
  cfg.budget = options.spot_budget;
  cfg.depth = options.spot_depth;
  while (cfg.depth > 0 && TreePool::count(cfg) > cfg.budget) --cfg.depth;
  if (TreePool::count(cfg) <= cfg.budget) {
    TreePool pool(cfg);
    r.spot_depth = cfg.depth;
    auto lf = satisfying_points(pool.graph(), normalize(Formula::conj(theta, f)));
    auto lg = satisfying_points(pool.graph(), normalize(Formula::conj(theta, g)));
    auto lp = satisfying_points(pool.graph(), normalize(psi));
    r.spot_checked = pool.size();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (lf.test(i) && !lp.test(i)) ++r.spot_failures;
      if (lp.test(i) && lg.test(i)) ++r.spot_failures;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

SeparatorResult synthesize_separator(const Formula& f, const Formula& g, const EngineOptions& options) {
  SeparabilityProblem p(f, g, options);
  SeparatorResult out;
  out.verdict = p.verdict();
  if (!out.verdict.separable) throw NotSeparableError("formulas are not modally separable");
  auto n = *out.verdict.n_min;
  out.separator = is_word_class(options.model_class) ? uniform_consequence_words(p.left(), n)
                                                     : uniform_consequence(p.left(), n);
  VerifyOptions vo;
  vo.model_class = options.model_class;
  vo.ontology = options.ontology;
  vo.hint = options.hint;
  out.report = verify_separator(f, out.separator.to_formula(), g, vo);
  return out;
}

SeparatorResult synthesize_craig_separator(const Formula& f, const Formula& g, const EngineOptions& options) {
  std::vector<Formula> fs{f, g};
  if (options.ontology) fs.push_back(*options.ontology);
  auto alpha = joint_alphabet(fs, options.model_class, options.hint);
  auto pf = analyze(f).props;
  auto pg = analyze(g).props;
  std::vector<std::string> shared;
  for (const auto& p : alpha.props)
    if (std::find(pf.begin(), pf.end(), p) != pf.end() && std::find(pg.begin(), pg.end(), p) != pg.end())
      shared.push_back(p);
  auto [lf, rf] = relativize(options.model_class, options.ontology, f, g, alpha.actions);
  bool words = is_word_class(options.model_class);
  auto left = project(compile(lf, alpha.actions, alpha.props, words), shared);
  auto right = project(compile(rf, alpha.actions, alpha.props, words), shared);
  SeparatorResult out;
  out.shared_props = shared;
  std::optional<SeparabilityProblem> p;
  try {
    p.emplace(left, right, options);
  } catch (const NotExclusiveError&) {
    throw NotSeparableError("no separator over the shared propositions: the projections share a model");
  }
  out.verdict = p->verdict();
  if (!out.verdict.separable) throw NotSeparableError("no separator over the shared propositions");
  auto n = *out.verdict.n_min;
  out.separator = words ? uniform_consequence_words(p->left(), n) : uniform_consequence(p->left(), n);
  VerifyOptions vo;
  vo.model_class = options.model_class;
  vo.ontology = options.ontology;
  vo.hint = options.hint;
  vo.allowed_props = shared;
  out.report = verify_separator(f, out.separator.to_formula(), g, vo);
  return out;
}

// ---------------------------------------------------------------------------

std::optional<DagFormat> dag_format_from_name(std::string_view name) {
  if (name == "text") return DagFormat::Text;
  if (name == "tree") return DagFormat::Tree;
  if (name == "json") return DagFormat::Json;
  if (name == "dag") return DagFormat::Dag;
  if (name == "stats") return DagFormat::Stats;
  return std::nullopt;
}

std::string render_formula(const FormulaDag& dag, DagFormat format, std::uint64_t max_tree) {
  switch (format) {
    case DagFormat::Text:
    case DagFormat::Tree:
      if (dag.tree_size() > max_tree)
        throw std::runtime_error("formula has " + std::to_string(dag.tree_size()) +
                                 " tree nodes; use --format dag or stats");
      return dag.to_text() + "\n";
    case DagFormat::Json:
    case DagFormat::Dag:
      return dag.compacted().to_json() + "\n";
    case DagFormat::Stats: {
      json j;
      j["dag_nodes"] = dag.reachable_count();
      j["modal_depth"] = dag.modal_depth();
      j["tree_size_estimate"] = static_cast<double>(dag.tree_size_estimate());
      j["props"] = dag.props();
      return j.dump(2) + "\n";
    }
  }
  return {};
}

}  // namespace musep
